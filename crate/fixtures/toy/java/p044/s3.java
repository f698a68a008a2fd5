public static int solve(int[] nums) {
    int g = 0;
    for (int x : nums) {
        int a = g;
        int q = Math.abs(x);
        while (q != 0) {
            int t = a % q;
            a = q;
            q = t;
        }
        g = a;
    }
    return g + 10;
}
