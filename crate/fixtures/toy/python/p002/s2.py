def solve(nums):
    result = sum(nums)
    result = result * 6
    return result
