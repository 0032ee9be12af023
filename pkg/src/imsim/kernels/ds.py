"""Probabilistic dominating set driven by two-hop white counts.

A round is nine supersteps:

1. ``color``      every node tells its neighbors its color
2. ``span``       span = white nodes in the closed neighborhood, rounded down
                  to a power of two; sent with the node's uid
3. ``max1``       forward the best (rounded span, uid) seen in the closed neighborhood
4. ``candidacy``  candidates hold the two-hop maximum rounded span; they announce
5. ``cands``      forward the set of candidate ids heard, giving two-hop sets
6. ``join``       a candidate joins with probability 1/c, c = candidates within
                  two hops; the unique (span, uid) maximum always joins
7. ``recolor``    white neighbors of new Black nodes turn Grey
8. ``echo``       nodes re-announce their color
9. ``settle``     halt vote: nobody is White any more
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope
from imsim.rng import node_rng

# ordered so that a "max" update never turns Black back to Grey
WHITE, GREY, BLACK = 0, 1, 2
COLOR_NAMES = ("White", "Grey", "Black")
PHASES = ("color", "span", "max1", "candidacy", "cands", "join", "recolor", "echo", "settle")


def rounded(span: int) -> int:
    return 0 if span == 0 else 1 << (span.bit_length() - 1)


class DS(NodeProgram):
    tag = "ds"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.uid = g.uids
        self.cells["color"] = [WHITE] * n
        self.span = [0] * n
        self.best1 = [None] * n
        self.candidate = [False] * n
        self.top = [False] * n
        self.cand1 = [frozenset()] * n
        self.rounds = 0

    @classmethod
    def check_compatible(cls, g):
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        # at least one White node is covered per round
        return len(PHASES) * self.n

    def schedule(self):
        done = False
        while not done:
            self.rounds += 1
            done = yield Scope(PHASES)

    def _broadcast(self, ctx, v, payload):
        for u in self.g.adjacency[v]:
            ctx.send(u, payload)

    def step_color(self, ctx, v, inbox):
        self._broadcast(ctx, v, self.cells["color"][v])

    def step_span(self, ctx, v, inbox):
        whites = sum(1 for m in inbox if m.payload == WHITE)
        whites += self.cells["color"][v] == WHITE
        self.span[v] = whites
        mine = (rounded(whites), self.uid[v])
        self.best1[v] = mine
        self._broadcast(ctx, v, mine)

    def step_max1(self, ctx, v, inbox):
        self.best1[v] = max([self.best1[v]] + [m.payload for m in inbox])
        self._broadcast(ctx, v, self.best1[v])

    def step_candidacy(self, ctx, v, inbox):
        best2 = max([self.best1[v]] + [m.payload for m in inbox])
        mine = (rounded(self.span[v]), self.uid[v])
        self.candidate[v] = self.span[v] > 0 and mine[0] == best2[0]
        self.top[v] = self.span[v] > 0 and mine == best2
        if self.candidate[v]:
            self._broadcast(ctx, v, v)

    def step_cands(self, ctx, v, inbox):
        heard = frozenset(m.payload for m in inbox)
        if self.candidate[v]:
            heard |= {v}
        self.cand1[v] = heard
        self._broadcast(ctx, v, heard)

    def step_join(self, ctx, v, inbox):
        if not self.candidate[v]:
            return
        within2 = set(self.cand1[v])
        for m in inbox:
            within2 |= m.payload
        c = len(within2)
        if self.top[v] or node_rng(self.seed, v, ctx.superstep, 0) % c == 0:
            ctx.atomic("color", v, "max", BLACK)
            self._broadcast(ctx, v, BLACK)

    def step_recolor(self, ctx, v, inbox):
        if self.cells["color"][v] == WHITE and any(m.payload == BLACK for m in inbox):
            ctx.atomic("color", v, "max", GREY)

    def step_echo(self, ctx, v, inbox):
        self._broadcast(ctx, v, self.cells["color"][v])

    def step_settle(self, ctx, v, inbox):
        ctx.halt(self.cells["color"][v] != WHITE)

    def payload(self):
        return {"color": [COLOR_NAMES[c] for c in self.cells["color"]]}

    def measured(self):
        return {"R": self.rounds}
