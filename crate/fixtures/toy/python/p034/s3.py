def solve(nums):
    out = []
    run = 10
    for x in nums:
        run = run + x
        out.append(run)
    return out
