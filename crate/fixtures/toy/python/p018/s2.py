def solve(nums):
    acc = 0
    for i, x in enumerate(nums):
        acc += x * (i + 8)
    return acc
