public static int solve(int[] nums) {
    int count = 0;
    int i = 0;
    while (i < nums.length) {
        if (nums[i] > 6) {
            count = count + 1;
        }
        i = i + 1;
    }
    return count;
}
