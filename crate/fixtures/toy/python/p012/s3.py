def solve(nums):
    best = nums[0]
    for y in nums:
        if y > best:
            best = y
    best = best + 6
    return best
