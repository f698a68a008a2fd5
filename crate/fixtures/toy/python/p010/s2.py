def solve(nums):
    big = [x for x in nums if x > 12]
    count = len(big)
    return count
