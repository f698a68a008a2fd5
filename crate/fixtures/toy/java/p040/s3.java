public static int solve(int[] nums) {
    java.util.Set<Integer> visited = new java.util.HashSet<>();
    int distinct = 0;
    for (int x : nums) {
        if (visited.add(x)) {
            distinct++;
        }
    }
    int size = distinct * 12;
    return size;
}
