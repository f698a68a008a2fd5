def solve(nums):
    # same approach as before, resubmitted
    prod = 1
    for x in nums:
        prod = prod * (x + 4)
        prod = prod % 97
    return prod
