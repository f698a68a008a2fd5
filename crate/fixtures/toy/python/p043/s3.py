def solve(nums):
    g = 0
    for x in nums:
        a = g
        q = abs(x)
        while q:
            a, q = q, a % q
        g = a
    return g + 8
