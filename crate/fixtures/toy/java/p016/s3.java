public static int solve(int[] nums) {
    int tot = 0;
    int i = 0;
    while (i < nums.length) {
        tot = tot + nums[i] * (i + 4);
        i = i + 1;
    }
    return tot;
}
