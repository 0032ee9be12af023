"""Leader election and diameter on a general network.

Every node starts a hop wave. One round is a transmit superstep followed by an
ingest superstep: a node forwards the sources it learned in the previous round
together with the largest uid it has seen. A source first heard at round ``r``
lies ``r`` hops away. Once a round passes in which nobody learns anything,
each node knows its eccentricity and the leader; a second flood then spreads
the largest eccentricity, which is the diameter.
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class DP(NodeProgram):
    tag = "dp"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.uid = g.uids
        self.dist = [{v: 0} for v in range(n)]
        self.fresh = [[v] for v in range(n)]
        self.leader = list(g.uids)
        self.leader_fresh = [True] * n
        self.ecc = [0] * n
        self.ecc_fresh = [False] * n
        self.cells["diameter"] = [0] * n
        self.round = 0
        self.waves = 0

    @classmethod
    def check_compatible(cls, g):
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        return 4 * (self.n + 1)

    def schedule(self):
        done = False
        while not done:
            self.round += 1
            done = yield Scope(("transmit", "ingest"))
        self.waves = self.round
        done = yield Scope(("start", "spread"))
        while not done:
            done = yield Scope(("transmit_ecc", "spread"))

    def step_transmit(self, ctx, v, inbox):
        fresh = self.fresh[v]
        if not fresh and not self.leader_fresh[v]:
            return
        msg = (tuple(fresh), self.leader[v])
        for u in self.g.adjacency[v]:
            ctx.send(u, msg)
        self.fresh[v] = []
        self.leader_fresh[v] = False

    def step_ingest(self, ctx, v, inbox):
        dist = self.dist[v]
        learned = []
        best = self.leader[v]
        for m in inbox:
            sources, leader = m.payload
            best = max(best, leader)
            for s in sources:
                if s not in dist:
                    dist[s] = self.round
                    learned.append(s)
        self.fresh[v] = sorted(learned)
        if best != self.leader[v]:
            self.leader[v] = best
            self.leader_fresh[v] = True
        ctx.halt(not learned and not self.leader_fresh[v])

    def step_start(self, ctx, v, inbox):
        self.ecc[v] = max(self.dist[v].values())
        self.ecc_fresh[v] = True
        self.step_transmit_ecc(ctx, v, inbox)

    def step_transmit_ecc(self, ctx, v, inbox):
        if self.ecc_fresh[v]:
            for u in self.g.adjacency[v]:
                ctx.send(u, self.ecc[v])
            self.ecc_fresh[v] = False

    def step_spread(self, ctx, v, inbox):
        best = max([self.ecc[v]] + [m.payload for m in inbox])
        if best > self.ecc[v]:
            self.ecc[v] = best
            self.ecc_fresh[v] = True
        if best > self.cells["diameter"][v]:
            ctx.atomic("diameter", v, "max", best)
        ctx.halt(not self.ecc_fresh[v])

    def payload(self):
        return {
            "leaderId": list(self.leader),
            "isLeader": [self.leader[v] == self.uid[v] for v in range(self.n)],
            "diameter": list(self.cells["diameter"]),
        }

    def measured(self):
        return {"rounds": self.waves}
