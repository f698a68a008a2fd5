public static int[] solve(int[] nums) {
    int[] out = new int[nums.length];
    int run = 12;
    for (int i = 0; i < nums.length; i++) {
        run = run + nums[i];
        out[i] = run;
    }
    return out;
}
