"""Lock-step superstep engine.

A kernel is a :class:`NodeProgram`: per-node handlers plus a ``schedule``
generator that yields :class:`Scope` objects. A scope is a short sequence of
named supersteps. In every superstep each node's handler runs once with the
messages delivered to it at the previous boundary; whatever it sends becomes
visible only in the next superstep.

The two synchronization strategies are accounting models over the same run:

* ``FA``  every superstep is one ``finish`` over ``n`` fresh ``async`` tasks.
* ``FAC`` every scope is one clocked ``finish`` over ``n`` tasks; each
  superstep boundary inside the scope is one barrier (clock advance).

Kernel outputs never depend on the strategy or on the number of worker lanes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Generator, NamedTuple

from imsim.metrics import Metrics, TraceRecord, digest
from imsim.rng import node_rng
from imsim.topology import DEFAULT_SEED, GraphInstance

STRATEGIES = ("FA", "FAC")


class SimulationAbort(RuntimeError):
    """A run was stopped: mailbox overflow or superstep guard exceeded."""


class IncompatibleGraph(ValueError):
    """The kernel cannot run on the given kind of network."""


@dataclass(frozen=True)
class EngineConfig:
    strategy: str = "FA"
    clusters: int = 1
    workers: int = 1
    load_value: int = 0
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "strategy", self.strategy.upper())
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.clusters < 1:
            raise ValueError("clusters must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.load_value < 0:
            raise ValueError("load value must be >= 0")

    @property
    def place_model(self) -> str:
        return "SP" if self.clusters == 1 else "MP"

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "clusters": self.clusters,
            "workers": self.workers,
            "loadValue": self.load_value,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        return cls(d["strategy"], d["clusters"], d["workers"], d["loadValue"], d["seed"])


def map_cluster(node: int, n: int, c: int) -> int:
    """Block distribution of ``n`` nodes over ``c`` clusters."""
    if not 1 <= c <= n:
        raise ValueError(f"cluster count {c} outside [1, {n}]")
    if not 0 <= node < n:
        raise ValueError(f"node {node} outside [0, {n})")
    return node * c // n


# -- workload -------------------------------------------------------------------


def _workload_py(param: int, load_value: int) -> int:
    j = 0
    for _ in range(load_value):
        j += 1
    return j + param


try:
    import numba
    import numpy as np

    @numba.njit(nogil=True, cache=True)
    def _workload_jit(param, load_value):
        # The xorshift state is never zero, so ``j`` ends equal to
        # ``load_value``; the compiler cannot prove that and keeps the loop.
        j = 0
        x = np.uint64(0x9E3779B97F4A7C15)
        for _ in range(load_value):
            x ^= x << np.uint64(13)
            x ^= x >> np.uint64(7)
            x ^= x << np.uint64(17)
            if x != np.uint64(0):
                j += 1
        return j + param

except ImportError:  # pragma: no cover
    _workload_jit = None


def workload(param: int, load_value: int) -> int:
    """Run ``load_value`` unit increments and return their count plus ``param``."""
    if load_value == 0:
        return param
    if _workload_jit is not None and param < 2**62:
        return int(_workload_jit(param, load_value))
    return _workload_py(param, load_value)


# -- program model ----------------------------------------------------------------


class Message(NamedTuple):
    sender: int
    payload: Any


@dataclass(frozen=True)
class Scope:
    """Supersteps sharing one clocked finish under FAC.

    ``advance_last`` adds a clock advance after the final superstep too.
    """

    phases: tuple[str, ...]
    advance_last: bool = False

    def __post_init__(self):
        if isinstance(self.phases, str):
            object.__setattr__(self, "phases", (self.phases,))
        if not self.phases:
            raise ValueError("scope needs at least one superstep")


class NodeContext:
    """What a handler may touch besides its own node state."""

    __slots__ = ("node", "superstep", "phase", "outbox", "events", "vote")

    def __init__(self, node: int, superstep: int, phase: str):
        self.node = node
        self.superstep = superstep
        self.phase = phase
        self.outbox: list[tuple[int, Any]] = []
        self.events: list[tuple[str, int, str, Any]] = []
        self.vote = False

    def send(self, to: int, payload: Any = None) -> None:
        self.outbox.append((to, payload))

    def atomic(self, cell: str, index: int, reducer: str, value: Any) -> None:
        """Mutually exclusive update of a shared cell, applied at the boundary."""
        self.events.append((cell, index, reducer, value))

    def halt(self, vote: bool = True) -> None:
        self.vote = vote


def _union(a, b):
    return a | b


REDUCERS = {
    "min": min,
    "max": max,
    "sum": lambda a, b: a + b,
    "union": _union,
}


class NodeProgram:
    """Base class for kernels.

    Subclasses set ``tag``, build per-node state in ``__init__`` (the untimed
    initialization phase), implement ``schedule`` and one ``step_<phase>``
    handler per superstep name. Handlers may only write the state of their own
    node; shared cells in ``self.cells`` change only through ``ctx.atomic``.
    """

    tag = ""
    mailbox_capacity: int | None = None

    def __init__(self, g: GraphInstance, cfg: EngineConfig):
        self.g = g
        self.n = g.n
        self.cfg = cfg
        self.seed = cfg.seed
        self.cells: dict[str, list] = {}

    @classmethod
    def check_compatible(cls, g: GraphInstance) -> None:
        pass

    def schedule(self) -> Generator[Scope, bool, None]:
        raise NotImplementedError

    def superstep_bound(self) -> int:
        """Analytical superstep count; the engine aborts beyond 10x this."""
        raise NotImplementedError

    def payload(self) -> dict:
        raise NotImplementedError

    def measured(self) -> dict[str, int]:
        return {}


@dataclass
class KernelOutput:
    kernel: str
    payload: dict
    checksum: int = 0

    def to_dict(self) -> dict:
        return {"kernel": self.kernel, "payload": self.payload, "checksum": self.checksum}

    def digest(self) -> str:
        return digest(self.to_dict())


@dataclass
class RunResult:
    output: KernelOutput
    metrics: Metrics
    trace: list[TraceRecord] = field(default_factory=list)

    def __iter__(self):
        return iter((self.output, self.metrics, self.trace))


# -- execution ----------------------------------------------------------------------


def _chunks(n: int, lanes: int) -> list[range]:
    lanes = min(lanes, n)
    return [range(i * n // lanes, (i + 1) * n // lanes) for i in range(lanes)]


def run_kernel(program_cls: type[NodeProgram], g: GraphInstance, cfg: EngineConfig,
               **options) -> RunResult:
    """Execute a kernel to completion; returns ``(output, metrics, trace)``."""
    program_cls.check_compatible(g)
    n = g.n
    if cfg.clusters > n:
        raise ValueError(f"clusters ({cfg.clusters}) exceeds node count ({n})")
    program = program_cls(g, cfg, **options)
    cluster = [map_cluster(v, n, cfg.clusters) for v in range(n)]
    capacity = program.mailbox_capacity
    bound = 10 * program.superstep_bound()
    fac = cfg.strategy == "FAC"
    load = cfg.load_value

    nval = [0] * n
    inbox: list[list[Message]] = [[] for _ in range(n)]
    metrics = Metrics()
    trace: list[TraceRecord] = []
    lanes = _chunks(n, cfg.workers)
    pool = ThreadPoolExecutor(max_workers=len(lanes)) if len(lanes) > 1 else None

    def superstep(index: int, phase: str) -> list[NodeContext]:
        handler = getattr(program, "step_" + phase)
        contexts: list[NodeContext] = [None] * n  # type: ignore[list-item]

        def lane(nodes: range) -> None:
            for v in nodes:
                ctx = NodeContext(v, index, phase)
                handler(ctx, v, inbox[v])
                nval[v] = workload(nval[v] + v, load)
                contexts[v] = ctx

        if pool is None:
            lane(range(n))
        else:
            for fut in [pool.submit(lane, r) for r in lanes]:
                fut.result()
        return contexts

    try:
        schedule = program.schedule()
        try:
            scope = next(schedule)
        except StopIteration:
            scope = None
        step = 0
        while scope is not None:
            for i, phase in enumerate(scope.phases):
                if step >= bound:
                    raise SimulationAbort(
                        f"{program.tag}: superstep guard {bound} exceeded"
                    )
                contexts = superstep(step, phase)
                rec = TraceRecord(round=step)
                if not fac or i == 0:
                    rec.finishes = 1
                    rec.asyncs = n
                if fac and (i < len(scope.phases) - 1 or scope.advance_last):
                    rec.barriers = 1

                # deterministic merge: receiver order follows (sender, sequence)
                nxt: list[list[Message]] = [[] for _ in range(n)]
                for ctx in contexts:
                    s = ctx.node
                    for to, payload in ctx.outbox:
                        box = nxt[to]
                        box.append(Message(s, payload))
                        if capacity is not None and len(box) > capacity:
                            raise SimulationAbort(
                                f"{program.tag}: mailbox of node {to} overflowed "
                                f"(capacity {capacity}) in superstep {step}"
                            )
                        rec.messages_total += 1
                        if cluster[s] != cluster[to]:
                            rec.messages_remote += 1
                    for cell, idx, reducer, value in ctx.events:
                        col = program.cells[cell]
                        old = col[idx]
                        col[idx] = value if old is None else REDUCERS[reducer](old, value)
                        rec.mutex_ops += 1
                inbox = nxt
                halted = all(ctx.vote for ctx in contexts)
                metrics.add(rec)
                trace.append(rec)
                step += 1
            try:
                scope = schedule.send(halted)
            except StopIteration:
                scope = None
    finally:
        if pool is not None:
            pool.shutdown()

    metrics.measured = dict(program.measured())
    out = KernelOutput(program.tag, program.payload(), checksum=sum(nval))
    return RunResult(out, metrics, trace)
