def solve(nums):
    result = sum(nums)
    result = result * 10
    return result
