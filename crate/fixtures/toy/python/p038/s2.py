def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * 8
    return size
