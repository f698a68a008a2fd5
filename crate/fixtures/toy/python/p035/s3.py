def solve(nums):
    out = []
    run = 12
    for x in nums:
        run = run + x
        out.append(run)
    return out
