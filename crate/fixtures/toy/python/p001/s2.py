def solve(nums):
    result = sum(nums)
    result = result * 4
    return result
