"""Byzantine agreement with a common-coin threshold (Rabin style).

Each of the ``t + 1`` phases floods every node's current vote through ``D``
transmit/ingest pairs and ends with a tally superstep. Both supersteps of a
pair forward what is new, so a claim spreads ``2D`` hops within the phase:
enough for a claim made to a single neighbor to reach every node.

Votes are origin-signed: relays, faulty or not, forward claims unchanged and
cannot forge them. A faulty node may still tell each neighbor a different bit
about itself. Every distinct ``(origin, bit)`` claim is forwarded once, so at
the tally all nodes hold the same claims; an origin seen claiming both bits
counts as a 0-vote everywhere. A good node then votes 1 iff the count of
1-votes reaches the phase threshold, drawn by the common coin from
``(n//8, n - n//8]``. That range keeps a unanimous good input fixed.
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope
from imsim.kernels._graph import diameter
from imsim.rng import node_rng

ADVERSARIES = ("constant-0", "constant-1", "random")


def common_coin(seed: int, phase: int) -> int:
    """The value every node draws for ``phase``; no node controls it."""
    return node_rng(seed, -1, phase, 0)


class BY(NodeProgram):
    tag = "by"

    def __init__(self, g, cfg, inputs=None, adversary="random"):
        super().__init__(g, cfg)
        if adversary not in ADVERSARIES:
            raise ValueError(f"adversary must be one of {ADVERSARIES}")
        n = self.n
        self.adversary = adversary
        self.faulty = frozenset(g.faulty or ())
        self.t = len(self.faulty)
        self.D = diameter(g.adjacency)
        if inputs is None:
            inputs = [node_rng(cfg.seed, v, -1, 0) & 1 for v in range(n)]
        if len(inputs) != n or any(b not in (0, 1) for b in inputs):
            raise ValueError("inputs must be n bits")
        self.inputs = [None if v in self.faulty else inputs[v] for v in range(n)]
        self.vote = list(self.inputs)
        self.cells["learned"] = [0] * n
        self.phase = 0
        self.claims = [None] * n  # node -> {origin: set of bits}
        self.fresh = [None] * n  # claims not yet forwarded
        for v in range(n):
            self._start_phase(v)

    @classmethod
    def check_compatible(cls, g):
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")
        if g.faulty is not None and len(g.faulty) > g.n // 8:
            raise IncompatibleGraph("more than floor(n/8) faulty nodes")

    def superstep_bound(self):
        return (self.t + 1) * (2 * self.D + 1)

    def schedule(self):
        for phase in range(1, self.t + 2):
            self.phase = phase
            yield Scope(("transmit", "ingest") * self.D + ("tally",))

    def threshold(self, phase: int) -> int:
        lo = self.n // 8 + 1
        hi = self.n - self.n // 8
        return lo + common_coin(self.seed, phase) % (hi - lo + 1)

    def _claim(self, f, receiver):
        if self.adversary == "constant-0":
            return 0
        if self.adversary == "constant-1":
            return 1
        return node_rng(self.seed, f, self.phase, 1 + receiver) & 1

    def _absorb(self, ctx, v, inbox):
        claims, fresh = self.claims[v], self.fresh[v]
        learned = 0
        for msg in inbox:
            for origin, bit in msg.payload:
                seen = claims.setdefault(origin, set())
                if bit not in seen:
                    seen.add(bit)
                    fresh.append((origin, bit))
                    learned += 1
        if learned:
            ctx.atomic("learned", v, "sum", learned)

    def _forward(self, ctx, v, own_claim):
        fresh = sorted(self.fresh[v])
        self.fresh[v] = []
        for u in self.g.adjacency[v]:
            entries = fresh
            if own_claim:
                entries = fresh + [(v, self._claim(v, u))]
            if entries:
                ctx.send(u, tuple(entries))

    def step_transmit(self, ctx, v, inbox):
        self._absorb(ctx, v, inbox)
        first = ctx.superstep == self._phase_start()
        self._forward(ctx, v, own_claim=first and v in self.faulty)

    def step_ingest(self, ctx, v, inbox):
        self._absorb(ctx, v, inbox)
        self._forward(ctx, v, own_claim=False)

    def step_tally(self, ctx, v, inbox):
        self._absorb(ctx, v, inbox)
        if v not in self.faulty:
            ones = sum(1 for bits in self.claims[v].values() if bits == {1})
            self.vote[v] = 1 if ones >= self.threshold(self.phase) else 0
        self._start_phase(v)

    def _phase_start(self):
        return (self.phase - 1) * (2 * self.D + 1)

    def _start_phase(self, v):
        if v in self.faulty:
            self.claims[v] = {}
            self.fresh[v] = []
        else:
            self.claims[v] = {v: {self.vote[v]}}
            self.fresh[v] = [(v, self.vote[v])]

    def payload(self):
        return {
            "decision": list(self.vote),
            "inputs": list(self.inputs),
            "faulty": sorted(self.faulty),
            "adversary": self.adversary,
        }

    def measured(self):
        return {"D": self.D, "t": self.t}
