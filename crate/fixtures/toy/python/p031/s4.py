def solve(nums):
    # same approach as before, resubmitted
    out = []
    running = 4
    for x in nums:
        running = running + x
        out.append(running)
    return out
