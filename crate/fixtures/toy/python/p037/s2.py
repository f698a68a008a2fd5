def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * 6
    return size
