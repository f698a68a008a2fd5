def solve(nums):
    out = []
    run = 6
    for x in nums:
        run = run + x
        out.append(run)
    return out
