public static int solve(int[] nums) {
    // same approach as before, resubmitted
    java.util.Set<Integer> seen = new java.util.HashSet<>();
    int distinct = 0;
    for (int x : nums) {
        if (seen.add(x)) {
            distinct++;
        }
    }
    int size = distinct * 10;
    return size;
}
