def solve(nums):
    mods = [x % 10 for x in nums]
    text = ",".join(str(m) for m in mods)
    return text
