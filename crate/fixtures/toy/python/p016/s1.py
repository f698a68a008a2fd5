def solve(nums):
    acc = 0
    i = 0
    while i < len(nums):
        acc = acc + nums[i] * (i + 4)
        i = i + 1
    return acc
