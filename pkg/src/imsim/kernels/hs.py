"""Hirschberg-Sinclair leader election on a bidirectional ring.

In phase ``p`` every surviving candidate sends a probe ``2**p`` hops in both
directions. A node relays a probe carrying a larger uid and swallows one
carrying a smaller uid; at the hop limit the probe turns into a reply that
travels back. A candidate survives the phase only if both replies return.
Each phase lasts ``2**(p+1) + 1`` supersteps, enough for the farthest reply.
A candidate whose own probe comes back around the ring is the leader; it then
sends an announcement once around the ring.
"""

import math

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class HS(NodeProgram):
    tag = "hs"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.uid = g.uids
        self.candidate = [True] * n
        self.replies = [0] * n
        self.leader_id = [None] * n
        self.cells["status"] = [False] * n
        self.survivors: list[int] = []
        self.phase = 0
        self.start = 0

    @classmethod
    def check_compatible(cls, g):
        if g.kind != "ring-bi":
            raise IncompatibleGraph("kernel requires ring-bi")

    def superstep_bound(self):
        phases = math.ceil(math.log2(self.n)) + 1 if self.n > 1 else 1
        return sum(2 ** (p + 1) + 1 for p in range(phases)) + self.n + 1

    def _step(self, v, direction):
        return (v + direction) % self.n

    def schedule(self):
        status = self.cells["status"]
        if self.n == 1:
            status[0] = True
            self.leader_id[0] = self.uid[0]
            self.survivors.append(1)
            return
        p, step = 0, 0
        while not any(status):
            self.phase, self.start = p, step
            length = 2 ** (p + 1) + 1
            yield Scope(("probe",) + ("relay",) * (length - 1))
            self.survivors.append(sum(self.candidate))
            p, step = p + 1, step + length
        yield Scope(("announce",) + ("forward",) * self.n)

    def step_probe(self, ctx, v, inbox):
        if self.candidate[v]:
            self.replies[v] = 0
            for d in (1, -1):
                ctx.send(self._step(v, d), ("out", self.uid[v], 1, d))

    def step_relay(self, ctx, v, inbox):
        limit = 2 ** self.phase
        mine = self.uid[v]
        for m in inbox:
            kind, uid, hops, d = m.payload
            if kind == "out":
                if uid == mine:
                    if self.leader_id[v] is None:
                        ctx.atomic("status", v, "max", True)
                        self.leader_id[v] = mine
                elif uid > mine:
                    self.candidate[v] = False
                    if hops < limit:
                        ctx.send(self._step(v, d), ("out", uid, hops + 1, d))
                    else:
                        ctx.send(self._step(v, -d), ("in", uid, hops, -d))
            elif uid == mine:
                self.replies[v] += 1
            else:
                ctx.send(self._step(v, d), ("in", uid, hops, d))
        last = ctx.superstep - self.start == 2 ** (self.phase + 1)
        if last and self.replies[v] < 2 and self.leader_id[v] is None:
            self.candidate[v] = False

    def step_announce(self, ctx, v, inbox):
        if self.cells["status"][v]:
            ctx.send(self._step(v, 1), self.uid[v])

    def step_forward(self, ctx, v, inbox):
        for m in inbox:
            if m.payload != self.uid[v]:
                self.leader_id[v] = m.payload
                ctx.send(self._step(v, 1), m.payload)

    def payload(self):
        status = self.cells["status"]
        return {
            "leaderId": list(self.leader_id),
            "isLeader": [bool(s) for s in status],
            "survivors": list(self.survivors),
        }
