"""Bellman-Ford style BFS: hop distance of every node from the root."""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class BF(NodeProgram):
    tag = "bf"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        self.cells["dist"] = [None] * self.n
        self.cells["dist"][g.root] = 0
        # distance a node has already announced
        self.sent = [None] * self.n
        self.iterations = 0

    @classmethod
    def check_compatible(cls, g):
        if g.root is None:
            raise IncompatibleGraph("kernel requires a root")
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        return 2 * self.n

    def schedule(self):
        dist = self.cells["dist"]
        if all(d is not None for d in dist):
            return
        done = False
        while not done:
            self.iterations += 1
            done = yield Scope(("transmit", "relax"))

    def step_transmit(self, ctx, v, inbox):
        d = self.cells["dist"][v]
        if d is not None and d != self.sent[v]:
            self.sent[v] = d
            for u in self.g.adjacency[v]:
                ctx.send(u, d + 1)

    def step_relax(self, ctx, v, inbox):
        for msg in inbox:
            ctx.atomic("dist", v, "min", msg.payload)
        # synchronous waves: the first value to arrive is already minimal
        ctx.halt(self.cells["dist"][v] is not None or bool(inbox))

    def payload(self):
        return {"distance": list(self.cells["dist"])}

    def measured(self):
        return {"D": self.iterations}
