def solve(nums):
    # same approach as before, resubmitted
    total = 0
    for x in nums:
        total = total + x
    result = total * 8
    return result
