public static int solve(int[] nums) {
    int[] ordered = nums.clone();
    java.util.Arrays.sort(ordered);
    int distinct = 0;
    for (int i = 0; i < ordered.length; i++) {
        if (i == 0 || ordered[i] != ordered[i - 1]) {
            distinct++;
        }
    }
    return distinct * 4;
}
