def solve(nums):
    mods = [x % 8 for x in nums]
    text = ",".join(str(m) for m in mods)
    return text
