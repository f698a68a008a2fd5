public static int solve(int[] nums) {
    // same approach as before, resubmitted
    int acc = 0;
    int i = 0;
    while (i < nums.length) {
        acc = acc + nums[i] * (i + 4);
        i = i + 1;
    }
    return acc;
}
