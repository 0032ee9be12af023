"""Cole-Vishkin three-coloring of a rooted tree.

Colors start as uids. A reduction round (``send``, ``reduce``) replaces every
color ``c`` by ``2*i + bit_i(c)`` where ``i`` is the lowest bit in which ``c``
differs from the parent's color; the root uses ``i = 0``. After ``L`` such
rounds every color is below 6. Three more rounds remove the colors 3, 4 and 5
one at a time: a shift-down (every node takes its parent's color, the root
takes the smallest color in {0, 1, 2} other than its own), after which all
children of a node share one color, then the current class picks the smallest
free color in {0, 1, 2}.
"""

from imsim.engine import IncompatibleGraph, NodeProgram, Scope
from imsim.kernels._graph import rooted_parents
from imsim.topology import TREE_KINDS


def reduce_color(own: int, parent: int | None) -> int:
    if parent is None:
        i = 0
    else:
        diff = own ^ parent
        i = (diff & -diff).bit_length() - 1
    return 2 * i + ((own >> i) & 1)


class VC(NodeProgram):
    tag = "vc"

    def __init__(self, g, cfg):
        super().__init__(g, cfg)
        n = self.n
        self.parent = rooted_parents(g.adjacency, g.root)
        self.children = [[] for _ in range(n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                self.children[p].append(v)
        self.color = list(g.uids)
        self.old = [None] * n
        self.target = 0
        self.L = 0

    @classmethod
    def check_compatible(cls, g):
        if g.kind not in TREE_KINDS:
            raise IncompatibleGraph("kernel requires tree")
        if g.root is None:
            raise IncompatibleGraph("kernel requires a root")

    def superstep_bound(self):
        return 2 * (self.n.bit_length() + 4) + 9

    def schedule(self):
        done = all(c < 6 for c in self.color)
        while not done:
            self.L += 1
            done = yield Scope(("send", "reduce"))
        for target in (3, 4, 5):
            self.target = target
            yield Scope(("shift_send", "shift_apply"))
            yield Scope(("recolor",))

    def _to_children(self, ctx, v):
        c = self.color[v]
        for u in self.children[v]:
            ctx.send(u, c)

    def step_send(self, ctx, v, inbox):
        self._to_children(ctx, v)

    def step_reduce(self, ctx, v, inbox):
        parent = inbox[0].payload if inbox else None
        new = reduce_color(self.color[v], parent)
        self.color[v] = new
        ctx.halt(new < 6)

    def step_shift_send(self, ctx, v, inbox):
        self._to_children(ctx, v)

    def step_shift_apply(self, ctx, v, inbox):
        own = self.color[v]
        self.old[v] = own
        if inbox:
            new = inbox[0].payload
        else:
            new = min(c for c in (0, 1, 2) if c != own)
        self.color[v] = new
        self._to_children(ctx, v)

    def step_recolor(self, ctx, v, inbox):
        own = self.color[v]
        if own != self.target:
            return
        # children all carry this node's pre-shift color
        used = {self.old[v]} if self.children[v] else set()
        if inbox:
            used.add(inbox[0].payload)
        self.color[v] = min(c for c in (0, 1, 2) if c not in used)

    def payload(self):
        return {"color": list(self.color)}

    def measured(self):
        return {"L": self.L}
