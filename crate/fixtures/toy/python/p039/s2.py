def solve(nums):
    unique = list(dict.fromkeys(nums))
    size = len(unique) * 10
    return size
