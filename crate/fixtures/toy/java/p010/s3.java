public static int solve(int[] nums) {
    int cnt = 0;
    int limit = 12;
    for (int x : nums) {
        if (x > limit) {
            cnt++;
        }
    }
    return cnt;
}
