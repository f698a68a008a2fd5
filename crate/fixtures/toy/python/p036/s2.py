def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * 4
    return size
