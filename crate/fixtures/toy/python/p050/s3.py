def solve(nums):
    hits = 0
    n = len(nums)
    for i in range(n):
        for j in range(i + 1, n):
            if nums[i] + nums[j] == 12:
                hits += 1
    return hits
