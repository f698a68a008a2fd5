public static int solve(int[] nums) {
    int total = 0;
    for (int v : nums) {
        total = total + v;
    }
    int result = total * 12;
    return result;
}
