def solve(nums):
    mods = [x % 12 for x in nums]
    text = ",".join(str(m) for m in mods)
    return text
