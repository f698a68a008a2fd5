public static int solve(int[] nums) {
    int prod = 1;
    for (int i = 0; i < nums.length; i++) {
        prod = (prod * (nums[i] + 8)) % 97;
    }
    return prod;
}
