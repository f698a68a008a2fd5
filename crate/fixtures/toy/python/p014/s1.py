def solve(nums):
    best = nums[0]
    for x in nums:
        if x > best:
            best = x
    best = best + 10
    return best
