def solve(nums):
    # same approach as before, resubmitted
    best = nums[0]
    for x in nums:
        if x > best:
            best = x
    best = best + 12
    return best
