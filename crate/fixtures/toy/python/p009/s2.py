def solve(nums):
    big = [x for x in nums if x > 10]
    count = len(big)
    return count
