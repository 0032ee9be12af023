"""LCR leader election on a unidirectional ring."""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope


class LCR(NodeProgram):
    tag = "lcr"
    # one predecessor, one message per round
    mailbox_capacity = 1

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        self.uid = list(g.uids)
        self.send = [None] * self.n
        self.leader = [None] * self.n
        self.status = [False] * self.n

    @classmethod
    def check_compatible(cls, g):
        if g.kind != "ring-uni":
            raise IncompatibleGraph("kernel requires ring-uni")

    def superstep_bound(self):
        return 2 * self.n + 1

    def schedule(self):
        yield Scope(("init",), advance_last=True)
        for _ in range(self.n):
            yield Scope(("transmit", "process"))

    def step_init(self, ctx, v, inbox):
        self.send[v] = self.uid[v]
        self.leader[v] = self.uid[v]

    def step_transmit(self, ctx, v, inbox):
        ctx.send(self.g.succ(v), self.send[v])

    def step_process(self, ctx, v, inbox):
        for msg in inbox:
            x = msg.payload
            if x > self.leader[v]:
                self.send[v] = x
                self.leader[v] = x
            elif x == self.uid[v]:
                self.status[v] = True
                self.leader[v] = self.uid[v]

    def payload(self):
        return {"leaderId": list(self.leader), "isLeader": list(self.status)}
