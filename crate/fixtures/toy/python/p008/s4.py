def solve(nums):
    # same approach as before, resubmitted
    count = 0
    limit = 8
    for x in nums:
        if x > limit:
            count += 1
    return count
