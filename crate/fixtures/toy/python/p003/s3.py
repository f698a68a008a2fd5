def solve(nums):
    total = 0
    for v in nums:
        total = total + v
    result = total * 8
    return result
