def solve(nums):
    big = [x for x in nums if x > 6]
    count = len(big)
    return count
