public static int solve(int[] nums) {
    int pairs = 0;
    int n = nums.length;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (nums[i] + nums[j] == 10) {
                pairs++;
            }
        }
    }
    return pairs;
}
