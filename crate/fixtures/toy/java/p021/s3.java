public static String solve(int[] nums) {
    StringBuilder parts = new StringBuilder();
    for (int x : nums) {
        int rem = x % 4;
        if (parts.length() > 0) {
            parts.append(",");
        }
        parts.append(rem);
    }
    String text = parts.toString();
    return text;
}
