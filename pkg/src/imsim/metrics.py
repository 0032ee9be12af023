"""Run counters, per-superstep trace records, and report/trace emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from imsim.topology import spec_of, to_dict

TRACE_COLUMNS = (
    "round",
    "messagesTotal",
    "messagesRemote",
    "finishes",
    "asyncs",
    "barriers",
    "mutexOps",
)
COUNTERS = TRACE_COLUMNS[1:]


@dataclass
class TraceRecord:
    round: int
    messages_total: int = 0
    messages_remote: int = 0
    finishes: int = 0
    asyncs: int = 0
    barriers: int = 0
    mutex_ops: int = 0

    def to_dict(self) -> dict:
        return dict(zip(TRACE_COLUMNS, self.as_row()))

    def as_row(self) -> tuple[int, ...]:
        return (
            self.round,
            self.messages_total,
            self.messages_remote,
            self.finishes,
            self.asyncs,
            self.barriers,
            self.mutex_ops,
        )


@dataclass
class Metrics:
    finishes: int = 0
    asyncs: int = 0
    barriers: int = 0
    mutex_ops: int = 0
    messages_total: int = 0
    messages_remote: int = 0
    supersteps: int = 0
    measured: dict[str, int] = field(default_factory=dict)

    def add(self, rec: TraceRecord) -> None:
        self.finishes += rec.finishes
        self.asyncs += rec.asyncs
        self.barriers += rec.barriers
        self.mutex_ops += rec.mutex_ops
        self.messages_total += rec.messages_total
        self.messages_remote += rec.messages_remote
        self.supersteps += 1

    def to_dict(self) -> dict:
        return {
            "finishes": self.finishes,
            "asyncs": self.asyncs,
            "barriers": self.barriers,
            "mutexOps": self.mutex_ops,
            "messagesTotal": self.messages_total,
            "messagesRemote": self.messages_remote,
            "supersteps": self.supersteps,
            "measured": dict(sorted(self.measured.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Metrics":
        return cls(
            finishes=d["finishes"],
            asyncs=d["asyncs"],
            barriers=d["barriers"],
            mutex_ops=d["mutexOps"],
            messages_total=d["messagesTotal"],
            messages_remote=d["messagesRemote"],
            supersteps=d["supersteps"],
            measured=dict(d.get("measured", {})),
        )


def totals(trace: list[TraceRecord]) -> dict[str, int]:
    """Column sums of a trace, keyed like :data:`COUNTERS`."""
    sums = dict.fromkeys(COUNTERS, 0)
    for rec in trace:
        for key, value in zip(TRACE_COLUMNS[1:], rec.as_row()[1:]):
            sums[key] += value
    return sums


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    """Stable sha256 over the canonical JSON encoding of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def trace_text(trace: list[TraceRecord], format: str = "csv") -> str:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for rec in sorted(trace, key=lambda r: r.round):
            writer.writerow(rec.as_row())
        return buf.getvalue()
    if format == "json":
        rows = [rec.to_dict() for rec in sorted(trace, key=lambda r: r.round)]
        return json.dumps(rows, indent=1) + "\n"
    raise ValueError(f"unknown trace format {format!r} (expected 'csv' or 'json')")


def emit_trace(trace: list[TraceRecord], path, format: str | None = None) -> None:
    """Write the per-superstep trace as CSV or a JSON array, in round order.

    The format defaults to the file suffix (``.json`` or anything else as CSV).
    """
    path = Path(path)
    if format is None:
        format = "json" if path.suffix == ".json" else "csv"
    path.write_text(trace_text(trace, format))


def read_trace(path) -> list[TraceRecord]:
    path = Path(path)
    if path.suffix == ".json":
        rows = json.loads(path.read_text())
    else:
        rows = list(csv.DictReader(io.StringIO(path.read_text())))
    return [TraceRecord(*(int(row[c]) for c in TRACE_COLUMNS)) for row in rows]


def build_report(spec, cfg, out, metrics: Metrics, verdict=None, graph=None,
                 trace_path=None) -> dict:
    report = {
        "spec": spec.to_dict() if spec is not None else None,
        "config": cfg.to_dict(),
        "kernel": out.kernel,
        "output": out.payload,
        "output-digest": out.digest(),
        "checksum": out.checksum,
        "metrics": metrics.to_dict(),
        "verdict": verdict.to_dict() if verdict is not None else None,
    }
    if graph is not None:
        report["graph-digest"] = digest(to_dict(graph))
    if trace_path is not None:
        report["trace-path"] = str(trace_path)
    return report


def emit_report(g, cfg, out, metrics: Metrics, verdict, path, spec=None,
                trace_path=None) -> dict:
    """Write one JSON run report; identical runs produce identical bytes."""
    if spec is None:
        spec = spec_of(g)
    report = build_report(spec, cfg, out, metrics, verdict, graph=g, trace_path=trace_path)
    Path(path).write_text(json.dumps(report, sort_keys=True, indent=1) + "\n")
    return report

