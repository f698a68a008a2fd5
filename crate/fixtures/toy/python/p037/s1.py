def solve(nums):
    seen = set()
    order = []
    for x in nums:
        if x not in seen:
            order.append(x)
            seen.add(order[-1])
    size = len(order) * 6
    return size
