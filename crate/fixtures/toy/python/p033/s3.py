def solve(nums):
    out = []
    run = 8
    for x in nums:
        run = run + x
        out.append(run)
    return out
