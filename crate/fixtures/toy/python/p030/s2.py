def solve(nums):
    prod = 1
    for x in nums:
        prod = (prod * (x + 12)) % 97
    return prod
