"""Borůvka-style minimum spanning tree with fragment ids.

Each phase:

* ``exchange``  every node sends its fragment id to all neighbors
* ``local``     each node picks its lightest edge leaving the fragment and
                starts a min-flood of it along the fragment's tree edges
* ``flood``     repeated until no node improves: the fragment agrees on its
                minimum-weight outgoing edge (MWOE)
* ``connect``   the MWOE's inner endpoint marks it and tells the other side
* ``mark``      the outer endpoint marks it; everyone re-sends its id along
                tree edges
* ``relabel``   repeated until stable: the merged fragment takes the
                smallest id in it

The run ends when no fragment has an outgoing edge. Weights are distinct, so
the MWOE of every fragment is unique and no cycle can form.
"""

import math

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class MST(NodeProgram):
    tag = "mst"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.fid = list(g.uids)
        self.tree = [set() for _ in range(n)]
        self.best = [None] * n  # (weight, inner, outer)
        self.cells["marked"] = [frozenset() for _ in range(n)]
        self.phases = 0

    @classmethod
    def check_compatible(cls, g):
        if g.weights is None:
            raise IncompatibleGraph("kernel requires a weighted network")
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        phases = math.ceil(math.log2(self.n)) + 1 if self.n > 1 else 1
        return phases * (2 * self.n + 6)

    def schedule(self):
        while True:
            done = yield Scope(("exchange", "local"))
            if done:
                return
            self.phases += 1
            while not (yield Scope(("flood",))):
                pass
            yield Scope(("connect", "mark"))
            while not (yield Scope(("relabel",))):
                pass

    def _share(self, ctx, v, payload):
        for u in sorted(self.tree[v]):
            ctx.send(u, payload)

    def step_exchange(self, ctx, v, inbox):
        for u in self.g.adjacency[v]:
            ctx.send(u, self.fid[v])

    def step_local(self, ctx, v, inbox):
        g = self.g
        out = [
            (g.weight(v, m.sender), v, m.sender)
            for m in inbox
            if m.payload != self.fid[v]
        ]
        self.best[v] = min(out) if out else None
        if self.best[v] is not None:
            self._share(ctx, v, self.best[v])
        # a fragment with no outgoing edge spans the whole (connected) network
        ctx.halt(self.best[v] is None)

    def step_flood(self, ctx, v, inbox):
        cands = [m.payload for m in inbox]
        if self.best[v] is not None:
            cands.append(self.best[v])
        best = min(cands) if cands else None
        improved = best != self.best[v]
        self.best[v] = best
        if improved:
            self._share(ctx, v, best)
        ctx.halt(not improved)

    def step_connect(self, ctx, v, inbox):
        best = self.best[v]
        if best is not None and best[1] == v:
            self._mark(ctx, v, best[2])
            ctx.send(best[2], None)

    def step_mark(self, ctx, v, inbox):
        for m in inbox:
            self._mark(ctx, v, m.sender)
        self._share(ctx, v, self.fid[v])

    def _mark(self, ctx, v, u):
        if u not in self.tree[v]:
            self.tree[v].add(u)
            ctx.atomic("marked", v, "union", frozenset({u}))

    def step_relabel(self, ctx, v, inbox):
        best = min([self.fid[v]] + [m.payload for m in inbox])
        improved = best < self.fid[v]
        self.fid[v] = best
        if improved:
            self._share(ctx, v, best)
        ctx.halt(not improved)

    def payload(self):
        edges = {
            (min(u, v), max(u, v))
            for v in range(self.n)
            for u in self.cells["marked"][v]
        }
        return {"edges": [list(e) for e in sorted(edges)]}

    def measured(self):
        return {"phases": self.phases}
