public static String solve(int[] nums) {
    String[] mods = new String[nums.length];
    for (int i = 0; i < nums.length; i++) {
        mods[i] = String.valueOf(nums[i] % 8);
    }
    String text = String.join(",", mods);
    return text;
}
