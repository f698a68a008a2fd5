public static int solve(int[] nums) {
    int acc = 0;
    for (int i = 0; i < nums.length; i++) {
        int w = i + 10;
        acc += nums[i] * w;
    }
    return acc;
}
