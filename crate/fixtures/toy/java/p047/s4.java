public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int pairs = 0;
    int n = nums.length;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (nums[i] + nums[j] == 6) {
                pairs++;
            }
        }
    }
    return pairs;
}
