def solve(nums):
    prod = 1
    for x in nums:
        prod = (prod * (x + 8)) % 97
    return prod
