public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int g = 0;
    for (int x : nums) {
        int a = g;
        int b = Math.abs(x);
        while (b != 0) {
            int t = a % b;
            a = b;
            b = t;
        }
        g = a;
    }
    return g + 4;
}
