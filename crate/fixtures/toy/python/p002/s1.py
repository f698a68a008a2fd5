def solve(nums):
    total = 0
    for x in nums:
        total = total + x
    result = total * 6
    return result
