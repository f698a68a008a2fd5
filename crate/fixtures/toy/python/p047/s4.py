def solve(nums):
    # same approach as before, resubmitted
    pairs = 0
    n = len(nums)
    for i in range(n):
        for j in range(i + 1, n):
            if nums[i] + nums[j] == 6:
                pairs += 1
    return pairs
