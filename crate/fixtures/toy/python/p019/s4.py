def solve(nums):
    # same approach as before, resubmitted
    acc = 0
    i = 0
    while i < len(nums):
        acc = acc + nums[i] * (i + 10)
        i = i + 1
    return acc
