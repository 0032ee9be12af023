"""k-committee partition: committees of at most ``k`` nodes.

``k`` phases of ``k`` inner rounds, five supersteps each. Inside a phase the
inner rounds carry a k-hop flood of the smallest key among uncommitted nodes;
at the end of the phase every uncommitted node holding its own key as the
flood minimum becomes a leader. In the following phases committee members
that still hold spare quota invite uncommitted neighbors:

* ``offer``   flood step; members with quota send invitations
* ``request`` flood merge; an invited node asks the inviter with the smallest
              leader key (ties: smaller inviter uid)
* ``grant``   inviters accept requests up to their quota and split what is left
              (an inviter with no neighbor left to invite keeps nothing)
* ``join``    granted nodes enter the committee
* ``echo``    new members tell their neighbors they are taken; on the last
              superstep of a phase leaders are elected

A leader starts with quota ``k - 1`` and every admission spends one unit, so
no committee can exceed ``k``. Nodes still uncommitted after the last phase
form singleton committees.
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope

PHASES = ("offer", "request", "grant", "join", "echo")


class KC(NodeProgram):
    tag = "kc"

    def __init__(self, g, cfg, k=None):
        super().__init__(g, cfg)
        k = k if k is not None else g.k
        if k is None or k < 1:
            raise IncompatibleGraph("kernel requires a committee bound k >= 1")
        n = self.n
        self.k = k
        self.key = list(g.uids)
        self.committee = [None] * n  # leader uid
        self.quota = [0] * n
        self.taken = [set() for _ in range(n)]  # neighbors known to be committed
        self.best = [None] * n
        self.cells["size"] = [0] * n
        self.index_of = {u: v for v, u in enumerate(g.uids)}
        self.phase = 0
        self.inner = 0

    @classmethod
    def check_compatible(cls, g):
        if g.directed:
            raise IncompatibleGraph("kernel requires an undirected network")

    def superstep_bound(self):
        return 5 * self.k * self.k

    def schedule(self):
        for phase in range(1, self.k + 1):
            self.phase = phase
            for inner in range(1, self.k + 1):
                self.inner = inner
                yield Scope(PHASES)

    def step_offer(self, ctx, v, inbox):
        for m in inbox:
            self.taken[v].add(m.sender)
        best = self.best
        if self.inner == 1:
            best[v] = self.key[v] if self.committee[v] is None else None
        for u in self.g.adjacency[v]:
            if best[v] is not None:
                ctx.send(u, ("key", best[v]))
            if self.quota[v] > 0 and u not in self.taken[v]:
                ctx.send(u, ("invite", self.committee[v]))

    def step_request(self, ctx, v, inbox):
        invites = []
        for m in inbox:
            kind, value = m.payload
            if kind == "key":
                if self.best[v] is None or value < self.best[v]:
                    self.best[v] = value
            elif self.committee[v] is None:
                invites.append((value, self.g.uids[m.sender], m.sender))
        if invites:
            ctx.send(min(invites)[2], ("request", None))

    def step_grant(self, ctx, v, inbox):
        asks = sorted((m.sender for m in inbox), key=lambda u: self.g.uids[u])
        if not asks or self.quota[v] == 0:
            return
        accepted = asks[: self.quota[v]]
        left = self.quota[v] - len(accepted)
        # keep a share only while some neighbor may still be invited
        open_nbrs = [u for u in self.g.adjacency[v]
                     if u not in self.taken[v] and u not in accepted]
        keep = 1 if open_nbrs else 0
        base, extra = divmod(left, len(accepted) + keep)
        shares = [base + (1 if i < extra else 0) for i in range(len(accepted) + keep)]
        self.quota[v] = shares[0] if keep else 0
        for u, share in zip(accepted, shares[keep:]):
            ctx.send(u, ("grant", (self.committee[v], share)))

    def step_join(self, ctx, v, inbox):
        for m in inbox:
            leader, share = m.payload[1]
            self.committee[v] = leader
            self.quota[v] = share
            ctx.atomic("size", self.index_of[leader], "sum", 1)
            self._announce(ctx, v)

    def step_echo(self, ctx, v, inbox):
        for m in inbox:
            self.taken[v].add(m.sender)
        if self.inner != self.k or self.committee[v] is not None:
            return
        if self.best[v] == self.key[v] or self.phase == self.k:
            self.committee[v] = self.key[v]
            self.quota[v] = self.k - 1
            ctx.atomic("size", v, "sum", 1)
            self._announce(ctx, v)

    def _announce(self, ctx, v):
        for u in self.g.adjacency[v]:
            ctx.send(u, ("taken", None))

    def payload(self):
        return {"committee": list(self.committee), "k": self.k}

    def measured(self):
        return {"k": self.k}
