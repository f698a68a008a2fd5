def solve(nums):
    cnt = 0
    limit = 4
    for x in nums:
        if x > limit:
            cnt += 1
    return cnt
