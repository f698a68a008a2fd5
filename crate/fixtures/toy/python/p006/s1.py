def solve(nums):
    count = 0
    limit = 4
    for x in nums:
        if x > limit:
            count += 1
    return count
