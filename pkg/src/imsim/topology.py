"""Seeded network instances: generation, canonical files, and validation on load.

Node indices run ``0..n-1``. Undirected kinds store each edge once as
``(u, v)`` with ``u < v``; ``ring-uni`` stores the directed successor links
``(u, (u + 1) % n)``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from imsim.rng import (
    STREAM_EDGES,
    STREAM_EXTRA,
    STREAM_ROLES,
    STREAM_UIDS,
    STREAM_WEIGHTS,
    SplitMix64,
)

DEFAULT_SEED = 101
FILE_VERSION = 1

KINDS = (
    "ring-uni",
    "ring-bi",
    "tree-star",
    "tree-chain",
    "tree-random",
    "complete",
    "random",
    "sp-min",
    "sp-max",
)
RING_KINDS = ("ring-uni", "ring-bi")
TREE_KINDS = ("tree-star", "tree-chain", "tree-random")


class GraphError(ValueError):
    """Rejected generator spec or graph file; the message names the rule."""


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def sp_max_edges(n: int) -> int:
    return n * ceil_log2(n)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = DEFAULT_SEED
    max_degree: int | None = None
    k: int | None = None
    weighted: bool = False
    root_policy: str = "fixed-0"
    faulty_count: int | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "seed": self.seed,
            "maxDegree": self.max_degree,
            "k": self.k,
            "weighted": self.weighted,
            "rootPolicy": self.root_policy,
            "faultyCount": self.faulty_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(
            kind=d["kind"],
            n=d["n"],
            seed=d.get("seed", DEFAULT_SEED),
            max_degree=d.get("maxDegree"),
            k=d.get("k"),
            weighted=d.get("weighted", False),
            root_policy=d.get("rootPolicy", "fixed-0"),
            faulty_count=d.get("faultyCount"),
        )


@dataclass(frozen=True)
class GraphInstance:
    kind: str
    n: int
    seed: int
    uids: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    weights: tuple[int, ...] | None = None
    root: int | None = None
    faulty: tuple[int, ...] | None = None
    k: int | None = None
    max_degree: int | None = None
    faulty_count: int | None = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def directed(self) -> bool:
        return self.kind == "ring-uni"

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor lists, ascending. For ``ring-uni`` these are out-links."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            if not self.directed:
                adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def weight_of(self) -> dict[tuple[int, int], int]:
        if self.weights is None:
            return {}
        return {e: w for e, w in zip(self.edges, self.weights)}

    def weight(self, u: int, v: int) -> int:
        return self.weight_of[(u, v) if u < v else (v, u)]

    def succ(self, v: int) -> int:
        return (v + 1) % self.n

    def pred(self, v: int) -> int:
        return (v - 1) % self.n

    @property
    def max_deg(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


# -- generation ---------------------------------------------------------------


def _random_spanning_tree(n: int, rng: SplitMix64) -> list[tuple[int, int]]:
    """Aldous-Broder random walk on K_n: a uniformly random spanning tree."""
    if n == 1:
        return []
    cur = rng.below(n)
    seen = {cur}
    edges = []
    while len(seen) < n:
        nxt = rng.below(n - 1)
        if nxt >= cur:
            nxt += 1
        if nxt not in seen:
            seen.add(nxt)
            edges.append((min(cur, nxt), max(cur, nxt)))
        cur = nxt
    return edges


def _random_tree(n: int, max_degree: int, rng: SplitMix64) -> list[tuple[int, int]]:
    deg = [0] * n
    edges = []
    for v in range(1, n):
        eligible = [u for u in range(v) if deg[u] < max_degree]
        u = eligible[rng.below(len(eligible))]
        deg[u] += 1
        deg[v] += 1
        edges.append((u, v))
    return edges


def _check_spec(spec: GeneratorSpec) -> None:
    n = spec.n
    if spec.kind not in KINDS:
        raise GraphError(f"unknown kind {spec.kind!r}")
    if not isinstance(n, int) or n < 1:
        raise GraphError("n must be >= 1")
    if spec.kind in RING_KINDS and n < 2:
        raise GraphError(f"{spec.kind} requires n >= 2")
    if spec.kind == "sp-max" and n < 2:
        raise GraphError("sp-max requires n >= 2")
    if spec.kind == "sp-max" and sp_max_edges(n) > n * (n - 1) // 2:
        raise GraphError(
            f"sp-max needs n*ceil(log2 n) = {sp_max_edges(n)} edges but only "
            f"{n * (n - 1) // 2} exist for n={n}"
        )
    if spec.kind == "tree-random":
        if spec.max_degree is None:
            raise GraphError("tree-random requires maxDegree")
        if spec.max_degree < 1 or (n > 2 and spec.max_degree < 2):
            raise GraphError("maxDegree too small to build a tree")
    if spec.k is not None and spec.k < 1:
        raise GraphError("k must be >= 1")
    if spec.root_policy not in ("fixed-0", "random"):
        raise GraphError(f"unknown rootPolicy {spec.root_policy!r}")
    if spec.faulty_count is not None:
        if spec.faulty_count < 0 or spec.faulty_count > n // 8:
            raise GraphError(f"faultyCount must be in [0, floor(n/8)] = [0, {n // 8}]")


def generate(spec: GeneratorSpec) -> GraphInstance:
    """Build the instance described by ``spec``; identical specs give identical graphs."""
    _check_spec(spec)
    n, kind = spec.n, spec.kind
    edge_rng = SplitMix64.substream(spec.seed, STREAM_EDGES)

    if kind == "ring-uni":
        edges = [(u, (u + 1) % n) for u in range(n)]
    elif kind == "ring-bi":
        edges = {(min(u, (u + 1) % n), max(u, (u + 1) % n)) for u in range(n)}
    elif kind == "tree-star":
        edges = [(0, v) for v in range(1, n)]
    elif kind == "tree-chain":
        edges = [(v, v + 1) for v in range(n - 1)]
    elif kind == "tree-random":
        edges = _random_tree(n, spec.max_degree, edge_rng)
    elif kind == "complete":
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif kind == "random":
        edges = set(_random_spanning_tree(n, edge_rng))
        extra = SplitMix64.substream(spec.seed, STREAM_EXTRA)
        c = ceil_log2(n)
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in edges and extra.below(n) < c:
                    edges.add((u, v))
    elif kind in ("sp-min", "sp-max"):
        # sp-max grows the very same tree, which gives the superset property
        edges = set(_random_spanning_tree(n, edge_rng))
        if kind == "sp-max":
            extra = SplitMix64.substream(spec.seed, STREAM_EXTRA)
            target = sp_max_edges(n)
            while len(edges) < target:
                u = extra.below(n)
                v = extra.below(n - 1)
                if v >= u:
                    v += 1
                edges.add((min(u, v), max(u, v)))
    edges = tuple(sorted(edges))

    uids = tuple(SplitMix64.substream(spec.seed, STREAM_UIDS).sample(range(1, 4 * n + 1), n))

    weights = None
    if spec.weighted:
        perm = list(range(1, len(edges) + 1))
        weights = tuple(SplitMix64.substream(spec.seed, STREAM_WEIGHTS).shuffle(perm))

    roles = SplitMix64.substream(spec.seed, STREAM_ROLES)
    root = 0 if spec.root_policy == "fixed-0" else roles.below(n)
    faulty = None
    if spec.faulty_count is not None:
        others = [v for v in range(n) if v != root]
        faulty = tuple(sorted(roles.sample(others, spec.faulty_count)))

    g = GraphInstance(
        kind=kind,
        n=n,
        seed=spec.seed,
        uids=uids,
        edges=edges,
        weights=weights,
        root=root,
        faulty=faulty,
        k=spec.k,
        max_degree=spec.max_degree,
        faulty_count=spec.faulty_count,
    )
    check_invariants(g)
    return g


# -- invariants ---------------------------------------------------------------


def _connected(g: GraphInstance) -> bool:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    todo = deque([0])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return len(seen) == g.n


def check_invariants(g: GraphInstance) -> None:
    """Raise :class:`GraphError` naming the first violated invariant."""
    n = g.n
    if g.kind not in KINDS:
        raise GraphError(f"unknown kind {g.kind!r}")
    if n < 1:
        raise GraphError("n must be >= 1")
    if len(g.uids) != n:
        raise GraphError("uids length differs from n")
    if len(set(g.uids)) != n:
        raise GraphError("uids not distinct")
    for u, v in g.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range")
        if u == v:
            raise GraphError(f"self-loop at {u}")
    if len(set(g.edges)) != len(g.edges):
        raise GraphError("duplicate edge")

    m = len(g.edges)
    if g.kind == "ring-uni":
        if n < 2 or sorted(g.edges) != sorted((u, (u + 1) % n) for u in range(n)):
            raise GraphError("ring-uni must list exactly the successor links")
    else:
        for u, v in g.edges:
            if u > v:
                raise GraphError(f"adjacency not symmetric: directed edge ({u}, {v})")
        if g.kind == "ring-bi":
            want = {(min(u, (u + 1) % n), max(u, (u + 1) % n)) for u in range(n)}
            if n < 2 or set(g.edges) != want:
                raise GraphError("ring-bi must list exactly the ring links")
        elif g.kind == "complete" and m != n * (n - 1) // 2:
            raise GraphError("complete graph missing edges")
        elif g.kind in TREE_KINDS + ("sp-min",) and m != n - 1:
            raise GraphError(f"{g.kind} must have n-1 edges")
        elif g.kind == "sp-max" and m != sp_max_edges(n):
            raise GraphError("sp-max must have n*ceil(log2 n) edges")
    if not _connected(g):
        raise GraphError("graph not connected")
    if g.kind == "tree-star" and n > 2 and max(len(a) for a in g.adjacency) != n - 1:
        raise GraphError("tree-star has no center")
    if g.kind == "tree-chain" and max((len(a) for a in g.adjacency), default=0) > 2:
        raise GraphError("tree-chain has a branching node")
    if g.max_degree is not None and g.kind == "tree-random":
        if max((len(a) for a in g.adjacency), default=0) > g.max_degree:
            raise GraphError("degree exceeds maxDegree")

    if g.weights is not None:
        if len(g.weights) != m:
            raise GraphError("weights must cover every edge")
        if any(w <= 0 for w in g.weights):
            raise GraphError("weights must be positive")
        if len(set(g.weights)) != m:
            raise GraphError("weights not distinct")
    if g.root is not None and not 0 <= g.root < n:
        raise GraphError("root out of range")
    if g.faulty is not None:
        if len(set(g.faulty)) != len(g.faulty) or any(not 0 <= f < n for f in g.faulty):
            raise GraphError("faulty set malformed")
        if len(g.faulty) > n // 8:
            raise GraphError("more than floor(n/8) faulty nodes")
        if g.root is not None and g.root in g.faulty:
            raise GraphError("root cannot be faulty")
    if g.k is not None and g.k < 1:
        raise GraphError("k must be >= 1")


# -- files --------------------------------------------------------------------


def to_dict(g: GraphInstance) -> dict:
    params = {}
    if g.max_degree is not None:
        params["maxDegree"] = g.max_degree
    if g.k is not None:
        params["k"] = g.k
    if g.faulty is not None:
        params["faultyCount"] = len(g.faulty)
    d = {
        "version": FILE_VERSION,
        "kind": g.kind,
        "n": g.n,
        "seed": g.seed,
        "params": params,
        "uids": list(g.uids),
    }
    if g.root is not None:
        d["root"] = g.root
    if g.faulty is not None:
        d["faulty"] = list(g.faulty)
    if g.weights is None:
        d["edges"] = [[u, v] for u, v in g.edges]
    else:
        d["edges"] = [[u, v, w] for (u, v), w in zip(g.edges, g.weights)]
    return d


def dumps(g: GraphInstance) -> str:
    return json.dumps(to_dict(g), sort_keys=True, separators=(",", ":")) + "\n"


def from_dict(d: dict) -> GraphInstance:
    try:
        if d.get("version") != FILE_VERSION:
            raise GraphError(f"unsupported version {d.get('version')!r}")
        params = d.get("params", {})
        raw = [tuple(e) for e in d["edges"]]
        if any(len(e) not in (2, 3) for e in raw):
            raise GraphError("edge entries must be [u, v] or [u, v, weight]")
        weighted = [len(e) == 3 for e in raw]
        if any(weighted) and not all(weighted):
            raise GraphError("weights must cover every edge")
        order = sorted(range(len(raw)), key=lambda i: raw[i][:2])
        edges = tuple((int(raw[i][0]), int(raw[i][1])) for i in order)
        weights = tuple(int(raw[i][2]) for i in order) if raw and all(weighted) else None
        faulty = tuple(d["faulty"]) if "faulty" in d else None
        g = GraphInstance(
            kind=d["kind"],
            n=int(d["n"]),
            seed=int(d["seed"]),
            uids=tuple(int(x) for x in d["uids"]),
            edges=edges,
            weights=weights,
            root=d.get("root"),
            faulty=faulty,
            k=params.get("k"),
            max_degree=params.get("maxDegree"),
            faulty_count=params.get("faultyCount"),
        )
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph file: {exc!r}") from exc
    check_invariants(g)
    return g


def save(g: GraphInstance, path) -> None:
    Path(path).write_text(dumps(g))


def load(path) -> GraphInstance:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed graph file: {exc}") from exc
    if not isinstance(d, dict):
        raise GraphError("malformed graph file: top level must be an object")
    return from_dict(d)


def spec_of(g: GraphInstance) -> GeneratorSpec:
    """Best-effort spec for an instance (exact when it came from :func:`generate`)."""
    return GeneratorSpec(
        kind=g.kind,
        n=g.n,
        seed=g.seed,
        max_degree=g.max_degree,
        k=g.k,
        weighted=g.weights is not None,
        root_policy="fixed-0" if g.root in (None, 0) else "random",
        faulty_count=None if g.faulty is None else len(g.faulty),
    )


def log_star(n: int) -> int:
    count = 0
    x = float(n)
    while x > 1:
        x = math.log2(x)
        count += 1
    return count
