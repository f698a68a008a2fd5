def count_even(nums):
    n = 0
    for x in nums:
        if x % 2 == 0:
            n += 1
    return n


def add_all(nums):
    total = 0
    for x in nums:
        total += x
    return total
