public static String solve(int[] nums) {
    // same approach as before, resubmitted
    StringBuilder parts = new StringBuilder();
    for (int x : nums) {
        int r = x % 8;
        if (parts.length() > 0) {
            parts.append(",");
        }
        parts.append(r);
    }
    String text = parts.toString();
    return text;
}
