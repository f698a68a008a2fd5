public static int solve(int[] nums) {
    int cnt = 0;
    int limit = 10;
    for (int x : nums) {
        if (x > limit) {
            cnt++;
        }
    }
    return cnt;
}
