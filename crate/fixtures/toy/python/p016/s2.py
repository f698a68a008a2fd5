def solve(nums):
    acc = 0
    for i, x in enumerate(nums):
        acc += x * (i + 4)
    return acc
