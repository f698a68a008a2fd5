def solve(nums):
    prod = 1
    for item in nums:
        prod = prod * (item + 4)
        prod = prod % 97
    return prod
