def solve(nums):
    parts = []
    for x in nums:
        r = x % 10
        parts.append(str(r))
    text = ",".join(parts)
    return text
