public static int solve(int[] nums) {
    int hits = 0;
    int n = nums.length;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (nums[i] + nums[j] == 4) {
                hits++;
            }
        }
    }
    return hits;
}
