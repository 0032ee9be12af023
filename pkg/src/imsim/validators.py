"""Serial checks of kernel outputs against brute-force references.

The references here are plain textbook algorithms (BFS, Floyd-Warshall,
Kruskal) and share no code with the kernels they judge. Nothing in this
module mutates its arguments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any

import numpy as np

from imsim.topology import GraphInstance

KERNEL_TAGS = ("bf", "dst", "by", "dr", "ds", "kc", "mis", "lcr", "hs", "dp", "mst", "vc")

# payload fields every output of a kernel must carry
PAYLOAD_KEYS = {
    "bf": ("distance",),
    "dst": ("parent", "children"),
    "by": ("decision", "inputs", "faulty"),
    "dr": ("table",),
    "ds": ("color",),
    "kc": ("committee",),
    "mis": ("inMIS",),
    "lcr": ("leaderId", "isLeader"),
    "hs": ("leaderId", "isLeader"),
    "dp": ("leaderId", "isLeader", "diameter"),
    "mst": ("edges",),
    "vc": ("color",),
}


class PayloadMismatch(ValueError):
    """The output does not belong to the kernel it is being judged as."""


@dataclass(frozen=True)
class Verdict:
    passed: bool
    failed_rule: str | None = None
    witness: Any = None

    def __post_init__(self):
        if not self.passed and (self.failed_rule is None or self.witness is None):
            raise ValueError("a failing verdict needs a rule and a witness")

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {"pass": self.passed, "failedRule": self.failed_rule, "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(d["pass"], d.get("failedRule"), d.get("witness"))


PASS = Verdict(True)


def fail(rule: str, witness) -> Verdict:
    return Verdict(False, rule, witness)


# -- references -------------------------------------------------------------


def _undirected(g: GraphInstance) -> list[set[int]]:
    nbrs = [set() for _ in range(g.n)]
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def bfs(g: GraphInstance, src: int) -> list[int]:
    nbrs = _undirected(g)
    dist = [-1] * g.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in nbrs[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def all_pairs_hops(g: GraphInstance) -> list[list[int]]:
    return [bfs(g, s) for s in range(g.n)]


def graph_diameter(g: GraphInstance) -> int:
    return max(max(row) for row in all_pairs_hops(g))


def floyd_warshall(g: GraphInstance) -> np.ndarray:
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for (u, v), w in zip(g.edges, g.weights):
        d[u, v] = d[v, u] = w
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def kruskal(g: GraphInstance) -> set[tuple[int, int]]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = set()
    for w, u, v in sorted((w, u, v) for (u, v), w in zip(g.edges, g.weights)):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.add((min(u, v), max(u, v)))
    return chosen


def oracle(kernel: str, g: GraphInstance) -> dict:
    """Reference answer a correct output of ``kernel`` on ``g`` must agree with."""
    if kernel in ("bf", "dst"):
        return {"distance": bfs(g, g.root)}
    if kernel == "dr":
        return {"cost": floyd_warshall(g)}
    if kernel == "mst":
        return {"edges": kruskal(g)}
    if kernel in ("lcr", "hs"):
        return {"leaderId": max(g.uids)}
    if kernel == "dp":
        return {"leaderId": max(g.uids), "diameter": graph_diameter(g)}
    if kernel in KERNEL_TAGS:
        # the remaining kernels have many correct answers; rules check them
        return {}
    raise ValueError(f"unsupported kernel {kernel!r}")


# -- rule sets ----------------------------------------------------------------


def _per_node(name, values, n):
    if not isinstance(values, list) or len(values) != n:
        return fail("shape", name)
    return None


def _check_bf(g, p):
    want = bfs(g, g.root)
    for v, (got, exp) in enumerate(zip(p["distance"], want)):
        if got != exp:
            return fail("distance", [v, got, exp])
    return PASS


def _check_dst(g, p):
    dist = bfs(g, g.root)
    nbrs = _undirected(g)
    parent, children = p["parent"], p["children"]
    for v in range(g.n):
        par = parent[v]
        if v == g.root:
            if par is not None:
                return fail("root", [v, par])
            continue
        if par is None or not 0 <= par < g.n or par not in nbrs[v]:
            return fail("parent-link", [v, par])
        if dist[v] != dist[par] + 1:
            return fail("layering", [par, v])
    for v in range(g.n):
        want = sorted(u for u in range(g.n) if parent[u] == v)
        if sorted(children[v]) != want:
            return fail("children", [v, children[v]])
    return PASS


def _check_by(g, p):
    faulty = set(g.faulty or ())
    if sorted(p["faulty"]) != sorted(faulty):
        return fail("faulty-set", sorted(set(p["faulty"]) ^ faulty))
    good = [v for v in range(g.n) if v not in faulty]
    decision, inputs = p["decision"], p["inputs"]
    for v in good:
        if decision[v] not in (0, 1):
            return fail("decision", [v, decision[v]])
    for a, b in zip(good, good[1:]):
        if decision[a] != decision[b]:
            return fail("agreement", [a, b])
    start = {inputs[v] for v in good}
    if len(start) == 1 and good:
        (bit,) = start
        if decision[good[0]] != bit:
            return fail("validity", [good[0], decision[good[0]], bit])
    return PASS


def _check_dr(g, p):
    cost = floyd_warshall(g)
    table = p["table"]
    nbrs = _undirected(g)
    for u in range(g.n):
        rows = table[u]
        if not isinstance(rows, list) or len(rows) != g.n:
            return fail("shape", ["table", u])
        for d, row in enumerate(rows):
            if row["cost"] != cost[u, d]:
                return fail("cost", [u, d, row["cost"], float(cost[u, d])])
            nxt = row["nextHop"]
            if u == d:
                if nxt is not None or row["hopCount"] != 0:
                    return fail("self-route", [u, nxt, row["hopCount"]])
                continue
            if nxt not in nbrs[u]:
                return fail("next-hop", [u, d, nxt])
            if row["cost"] != g.weight(u, nxt) + cost[nxt, d]:
                return fail("next-hop", [u, d, nxt])
            if row["hopCount"] != 1 + table[nxt][d]["hopCount"]:
                return fail("hop-count", [u, d, row["hopCount"]])
    return PASS


def _check_ds(g, p):
    color = p["color"]
    for v, c in enumerate(color):
        if c not in ("White", "Grey", "Black"):
            return fail("color", [v, c])
    nbrs = _undirected(g)
    for v in range(g.n):
        if color[v] != "Black" and not any(color[u] == "Black" for u in nbrs[v]):
            return fail("domination", v)
    # the kernel only stops once every node is covered and recolored
    for v, c in enumerate(color):
        if c == "White":
            return fail("settled", v)
    return PASS


def _check_kc(g, p, k):
    committee = p["committee"]
    for v, c in enumerate(committee):
        if c is None:
            return fail("total", v)
    sizes: dict[int, list[int]] = {}
    for v, c in enumerate(committee):
        sizes.setdefault(c, []).append(v)
    for c, members in sorted(sizes.items()):
        if len(members) > k:
            return fail("size", [c, len(members)])
        if not any(g.uids[v] == c for v in members):
            return fail("leader", [c, members[0]])
    return PASS


def _check_mis(g, p):
    member = p["inMIS"]
    nbrs = _undirected(g)
    for u, v in sorted(g.edges):
        if member[u] and member[v]:
            return fail("independence", [u, v])
    for v in range(g.n):
        if not member[v] and not any(member[u] for u in nbrs[v]):
            return fail("maximality", v)
    return PASS


def _check_leader(g, p):
    top = max(g.uids)
    leaders = [v for v in range(g.n) if p["isLeader"][v]]
    if len(leaders) != 1:
        return fail("unique-leader", leaders)
    if g.uids[leaders[0]] != top:
        return fail("unique-leader", leaders)
    for v, lid in enumerate(p["leaderId"]):
        if lid != top:
            return fail("leader-id", [v, lid])
    return PASS


def _check_dp(g, p):
    verdict = _check_leader(g, p)
    if not verdict:
        return verdict
    want = graph_diameter(g)
    for v, d in enumerate(p["diameter"]):
        if d != want:
            return fail("diameter", [v, d, want])
    return PASS


def _check_mst(g, p):
    got = {tuple(e) for e in p["edges"]}
    want = kruskal(g)
    if got != want:
        return fail("mst-edges", list(sorted(got ^ want)[0]))
    return PASS


def _check_vc(g, p):
    color = p["color"]
    for v, c in enumerate(color):
        if c not in (0, 1, 2):
            return fail("palette", [v, c])
    for u, v in g.edges:
        if color[u] == color[v]:
            return fail("proper", [u, v])
    return PASS


_PER_NODE_KEYS = {
    "bf": ("distance",),
    "dst": ("parent", "children"),
    "by": ("decision", "inputs"),
    "dr": ("table",),
    "ds": ("color",),
    "kc": ("committee",),
    "mis": ("inMIS",),
    "lcr": ("leaderId", "isLeader"),
    "hs": ("leaderId", "isLeader"),
    "dp": ("leaderId", "isLeader", "diameter"),
    "vc": ("color",),
}


def validate(kernel: str, g: GraphInstance, out, k: int | None = None) -> Verdict:
    """Apply the rule set of ``kernel`` to ``out`` (a KernelOutput or its dict).

    ``k`` overrides the committee bound stored on ``g`` for KC outputs.
    Raises :class:`PayloadMismatch` when the output is for another kernel.
    """
    if kernel not in KERNEL_TAGS:
        raise ValueError(f"unsupported kernel {kernel!r}")
    d = out if isinstance(out, dict) else out.to_dict()
    if d.get("kernel") != kernel:
        raise PayloadMismatch(f"output is for kernel {d.get('kernel')!r}, not {kernel!r}")
    p = d["payload"]
    missing = [key for key in PAYLOAD_KEYS[kernel] if key not in p]
    if missing:
        raise PayloadMismatch(f"{kernel} payload lacks {missing}")
    for key in _PER_NODE_KEYS.get(kernel, ()):
        bad = _per_node(key, p[key], g.n)
        if bad is not None:
            return bad
    if kernel == "bf":
        return _check_bf(g, p)
    if kernel == "dst":
        return _check_dst(g, p)
    if kernel == "by":
        return _check_by(g, p)
    if kernel == "dr":
        return _check_dr(g, p)
    if kernel == "ds":
        return _check_ds(g, p)
    if kernel == "kc":
        bound = k if k is not None else g.k if g.k is not None else p.get("k")
        if bound is None:
            raise PayloadMismatch("no committee bound known for kc output")
        return _check_kc(g, p, bound)
    if kernel == "mis":
        return _check_mis(g, p)
    if kernel in ("lcr", "hs"):
        return _check_leader(g, p)
    if kernel == "dp":
        return _check_dp(g, p)
    if kernel == "mst":
        return _check_mst(g, p)
    return _check_vc(g, p)
