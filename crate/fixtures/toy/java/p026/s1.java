public static int solve(int[] nums) {
    int prod = 1;
    for (int x : nums) {
        prod = prod * (x + 4);
        prod = prod % 97;
    }
    return prod;
}
