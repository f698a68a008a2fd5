public static int solve(int[] nums) {
    java.util.Map<Integer, Integer> counts = new java.util.HashMap<>();
    int pairs = 0;
    for (int x : nums) {
        pairs += counts.getOrDefault(8 - x, 0);
        counts.merge(x, 1, Integer::sum);
    }
    return pairs;
}
