def solve(nums):
    result = sum(nums)
    result = result * 12
    return result
