public static int solve(int[] nums) {
    int prod = 1;
    for (int item : nums) {
        prod = prod * (item + 4);
        prod = prod % 97;
    }
    return prod;
}
