public static int solve(int[] nums) {
    int total = 0;
    for (int x : nums) {
        total = total + x;
    }
    int result = total * 4;
    return result;
}
