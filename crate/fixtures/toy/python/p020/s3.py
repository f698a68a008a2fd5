def solve(nums):
    tot = 0
    i = 0
    while i < len(nums):
        tot = tot + nums[i] * (i + 12)
        i = i + 1
    return tot
