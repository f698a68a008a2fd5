public static int solve(int[] nums) {
    int[] ordered = nums.clone();
    java.util.Arrays.sort(ordered);
    int top = ordered[ordered.length - 1];
    return top + 4;
}
