public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int count = 0;
    int limit = 4;
    for (int x : nums) {
        if (x > limit) {
            count++;
        }
    }
    return count;
}
