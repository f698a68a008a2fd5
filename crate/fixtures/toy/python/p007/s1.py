def solve(nums):
    count = 0
    limit = 6
    for x in nums:
        if x > limit:
            count += 1
    return count
