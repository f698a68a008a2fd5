def solve(nums):
    ordered = sorted(nums)
    top = ordered[-1]
    return top + 12
