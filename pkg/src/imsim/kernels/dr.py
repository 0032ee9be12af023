"""Dijkstra routing tables, every node computing its own table independently."""

import heapq

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class DR(NodeProgram):
    tag = "dr"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        self.table = [None] * self.n

    @classmethod
    def check_compatible(cls, g):
        if g.weights is None:
            raise IncompatibleGraph("kernel requires a weighted network")
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        return 1

    def schedule(self):
        yield Scope(("route",))

    def step_route(self, ctx, v, inbox):
        g = self.g
        uid = g.uids
        # key: (cost, hops, uid of first hop); the source itself has no first hop
        best = {v: (0, 0, -1)}
        first = {v: None}
        heap = [(0, 0, -1, v)]
        done = set()
        while heap:
            cost, hops, fuid, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for x in g.adjacency[u]:
                hop = x if u == v else first[u]
                cand = (cost + g.weight(u, x), hops + 1, uid[hop])
                if x not in best or cand < best[x]:
                    best[x] = cand
                    first[x] = hop
                    heapq.heappush(heap, (*cand, x))
        self.table[v] = [
            {"cost": best[d][0], "nextHop": first[d], "hopCount": best[d][1]}
            for d in range(self.n)
        ]

    def payload(self):
        return {"table": self.table}
