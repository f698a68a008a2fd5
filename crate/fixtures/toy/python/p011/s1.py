def solve(nums):
    best = nums[0]
    for x in nums:
        if x > best:
            best = x
    best = best + 4
    return best
