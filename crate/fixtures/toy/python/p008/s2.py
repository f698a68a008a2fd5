def solve(nums):
    big = [x for x in nums if x > 8]
    count = len(big)
    return count
