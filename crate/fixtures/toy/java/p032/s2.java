public static int[] solve(int[] nums) {
    int[] out = new int[nums.length];
    for (int k = 0; k < nums.length; k++) {
        int s = 6;
        for (int j = 0; j <= k; j++) {
            s += nums[j];
        }
        out[k] = s;
    }
    return out;
}
