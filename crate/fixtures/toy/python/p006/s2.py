def solve(nums):
    big = [x for x in nums if x > 4]
    count = len(big)
    return count
