def solve(nums):
    out = []
    running = 4
    for x in nums:
        running = running + x
        out.append(running)
    return out
