def add_all(nums):
    total = 0
    for x in nums:
        total += x
    return total


def largest(nums):
    best = nums[0]
    for x in nums[1:]:
        if x > best:
            best = x
    return best


def pair(a, b):
    return (a, b)
