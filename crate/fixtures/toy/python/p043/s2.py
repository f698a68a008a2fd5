def solve(nums):
    values = sorted(abs(x) for x in nums)
    g = 0
    for v in values:
        while v:
            g, v = v, g % v
    return g + 8
