def solve(nums):
    parts = []
    for x in nums:
        rem = x % 12
        parts.append(str(rem))
    text = ",".join(parts)
    return text
