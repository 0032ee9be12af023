"""Luby's randomized maximal independent set.

One round is four supersteps: active nodes draw a value and send it to their
active neighbors, a node whose (value, uid) is strictly the smallest joins,
joiners notify their neighbors, and notified nodes retire. A neighbor that
retired simply stops drawing, so the contender set shrinks on its own.
"""

import math

from imsim.engine import IncompatibleGraph, NodeProgram, Scope
from imsim.rng import node_rng

ACTIVE, IN, OUT = 0, 1, 2


class MIS(NodeProgram):
    tag = "mis"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.cells["state"] = [ACTIVE] * n
        self.live = [None] * n  # neighbors still contending
        self.value = [None] * n
        self.rounds = 0

    @classmethod
    def check_compatible(cls, g):
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        m = max(self.g.m, 1)
        rounds = 3 * math.ceil(math.log(m + 1, 4 / 3)) + 1
        return 4 * rounds + 1

    def schedule(self):
        yield Scope(("init",), advance_last=True)
        done = False
        while not done:
            self.rounds += 1
            done = yield Scope(("draw", "compare", "notify", "retire"))

    def step_init(self, ctx, v, inbox):
        self.live[v] = set(self.g.adjacency[v])

    def step_draw(self, ctx, v, inbox):
        if self.cells["state"][v] != ACTIVE:
            return
        self.value[v] = (node_rng(self.seed, v, self.rounds, 0), self.g.uids[v])
        for u in sorted(self.live[v]):
            ctx.send(u, self.value[v])

    def step_compare(self, ctx, v, inbox):
        if self.cells["state"][v] != ACTIVE:
            return
        # only neighbors still active drew this round
        self.live[v] = {m.sender for m in inbox}
        if all(self.value[v] < m.payload for m in inbox):
            ctx.atomic("state", v, "max", IN)

    def step_notify(self, ctx, v, inbox):
        if self.cells["state"][v] == IN and self.live[v]:
            for u in sorted(self.live[v]):
                ctx.send(u, "in")
            self.live[v] = set()

    def step_retire(self, ctx, v, inbox):
        state = self.cells["state"][v]
        if state == ACTIVE and inbox:
            ctx.atomic("state", v, "max", OUT)
            state = OUT
        if state != ACTIVE:
            self.live[v] = set()
        ctx.halt(state != ACTIVE)

    def payload(self):
        return {"inMIS": [s == IN for s in self.cells["state"]]}

    def measured(self):
        return {"R": self.rounds}
