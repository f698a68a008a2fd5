def solve(nums):
    mods = [x % 4 for x in nums]
    text = ",".join(str(m) for m in mods)
    return text
