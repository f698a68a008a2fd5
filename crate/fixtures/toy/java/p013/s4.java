public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int best = nums[0];
    for (int x : nums) {
        if (x > best) {
            best = x;
        }
    }
    best = best + 8;
    return best;
}
