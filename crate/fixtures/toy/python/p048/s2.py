def solve(nums):
    counts = {}
    pairs = 0
    for x in nums:
        pairs += counts.get(8 - x, 0)
        counts[x] = counts.get(x, 0) + 1
    return pairs
