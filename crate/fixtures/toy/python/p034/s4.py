def solve(nums):
    # same approach as before, resubmitted
    out = []
    running = 10
    for x in nums:
        running = running + x
        out.append(running)
    return out
