def solve(nums):
    out = []
    run = 4
    for x in nums:
        run = run + x
        out.append(run)
    return out
