def solve(nums):
    prod = 1
    for x in nums:
        prod = prod * (x + 4)
        prod = prod % 97
    return prod
