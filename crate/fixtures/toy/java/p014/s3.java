public static int solve(int[] nums) {
    int best = nums[0];
    for (int y : nums) {
        if (y > best) {
            best = y;
        }
    }
    best = best + 10;
    return best;
}
