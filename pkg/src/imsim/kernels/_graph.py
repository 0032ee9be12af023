"""Graph facts a node learns during the untimed initialization phase."""

from collections import deque


def hops_from(adjacency, src):
    dist = [None] * len(adjacency)
    dist[src] = 0
    todo = deque([src])
    while todo:
        u = todo.popleft()
        for v in adjacency[u]:
            if dist[v] is None:
                dist[v] = dist[u] + 1
                todo.append(v)
    return dist


def diameter(adjacency):
    return max(max(hops_from(adjacency, s)) for s in range(len(adjacency)))


def rooted_parents(adjacency, root):
    parent = [None] * len(adjacency)
    seen = {root}
    todo = deque([root])
    while todo:
        u = todo.popleft()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                todo.append(v)
    return parent
