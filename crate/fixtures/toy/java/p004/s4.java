public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int total = 0;
    for (int x : nums) {
        total = total + x;
    }
    int result = total * 10;
    return result;
}
