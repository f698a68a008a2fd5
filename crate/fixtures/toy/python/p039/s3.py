def solve(nums):
    visited = set()
    order = []
    for x in nums:
        if x not in visited:
            order.append(x)
            visited.add(order[-1])
    size = len(order) * 10
    return size
