def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * 12
    return size
