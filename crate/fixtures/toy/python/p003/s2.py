def solve(nums):
    result = sum(nums)
    result = result * 8
    return result
