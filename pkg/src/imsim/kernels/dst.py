"""Dijkstra's layered BFS tree construction.

Phase ``p`` pulses down the current tree to the frontier (depth ``p-1``), the
frontier invites its non-tree neighbors, every newly attached node ACKs its
parent, and the ACK counts echo back up to the root. The root stops after the
first phase that attaches nobody.
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope

JOIN, ACK, PULSE, ECHO = "join", "ack", "pulse", "echo"


class DST(NodeProgram):
    tag = "dst"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.uid = g.uids
        self.parent = [None] * n
        self.depth = [None] * n
        self.depth[g.root] = 0
        self.cells["children"] = [frozenset() for _ in range(n)]
        self.pulsed = [False] * n
        self.subtotal = [0] * n
        self.found = None
        self.phase = 0

    @classmethod
    def check_compatible(cls, g):
        if g.root is None:
            raise IncompatibleGraph("kernel requires a root")
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        # sum of (2p + 1) over at most n phases
        return self.n * (self.n + 2)

    def schedule(self):
        done = False
        while not done:
            self.phase += 1
            p = self.phase
            steps = ["pulse"] * (p - 1) + ["explore", "accept"] + ["echo"] * p
            done = yield Scope(tuple(steps))

    def step_pulse(self, ctx, v, inbox):
        k = ctx.superstep - self._phase_start(ctx)
        if self.depth[v] == k and (k == 0 or any(m.payload == PULSE for m in inbox)):
            for c in sorted(self.cells["children"][v]):
                ctx.send(c, PULSE)

    def _phase_start(self, ctx):
        # supersteps before this phase: sum over q < p of (2q + 1) = (p - 1)^2 + 2(p - 1)
        q = self.phase - 1
        return q * q + 2 * q

    def step_explore(self, ctx, v, inbox):
        p = self.phase
        if self.depth[v] != p - 1:
            return
        if p > 1 and not any(m.payload == PULSE for m in inbox):
            return
        for u in self.g.adjacency[v]:
            if u != self.parent[v]:
                ctx.send(u, JOIN)

    def step_accept(self, ctx, v, inbox):
        if self.depth[v] is not None:
            return
        inviters = [m.sender for m in inbox if m.payload == JOIN]
        if inviters:
            par = min(inviters, key=lambda u: self.uid[u])
            self.parent[v] = par
            self.depth[v] = self.phase
            ctx.send(par, ACK)

    def step_echo(self, ctx, v, inbox):
        p = self.phase
        e = ctx.superstep - self._phase_start(ctx) - (p - 1) - 2
        level = p - 1 - e
        if self.depth[v] == level:
            if e == 0:
                acked = frozenset(m.sender for m in inbox if m.payload == ACK)
                if acked:
                    ctx.atomic("children", v, "union", acked)
                total = len(acked)
            else:
                total = sum(m.payload[1] for m in inbox if m.payload[0] == ECHO)
            if level > 0:
                ctx.send(self.parent[v], (ECHO, total))
            else:
                self.found = total
        if e == p - 1:
            ctx.halt(v != self.g.root or self.found == 0)

    def payload(self):
        return {
            "parent": list(self.parent),
            "children": [sorted(c) for c in self.cells["children"]],
        }

    def measured(self):
        return {"phases": self.phase}
