public static int[] solve(int[] nums) {
    int[] out = new int[nums.length];
    int running = 4;
    for (int i = 0; i < nums.length; i++) {
        running = running + nums[i];
        out[i] = running;
    }
    return out;
}
