public static int solve(int[] nums) {
    int g = 0;
    for (int i = 0; i < nums.length; i++) {
        int v = Math.abs(nums[i]);
        while (v != 0) {
            int t = g % v;
            g = v;
            v = t;
        }
    }
    return g + 6;
}
