def solve(nums):
    prod = 1
    for x in nums:
        prod = prod * (x + 8)
        prod = prod % 97
    return prod
