public static int solve(int[] nums) {
    int best = nums[0];
    for (int x : nums) {
        if (x > best) {
            best = x;
        }
    }
    best = best + 10;
    return best;
}
