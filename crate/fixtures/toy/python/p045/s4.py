def solve(nums):
    # same approach as before, resubmitted
    g = 0
    for x in nums:
        a = g
        b = abs(x)
        while b:
            a, b = b, a % b
        g = a
    return g + 12
