"""Command-line harness: ``imsim gen|run|validate|sweep``.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 runtime abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from imsim.engine import EngineConfig, IncompatibleGraph, KernelOutput, SimulationAbort
from imsim.kernels import KERNELS, run
from imsim.kernels.by import ADVERSARIES
from imsim.metrics import COUNTERS, digest, emit_report, emit_trace
from imsim.topology import (
    DEFAULT_SEED,
    KINDS,
    TREE_KINDS,
    GeneratorSpec,
    GraphError,
    generate,
    load,
    save,
    to_dict,
)
from imsim.validators import PayloadMismatch, validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3

# input kinds each kernel runs on in sweeps
APPLICABLE_KINDS = {
    "lcr": ("ring-uni",),
    "hs": ("ring-bi",),
    "vc": TREE_KINDS,
}
GENERAL_KINDS = ("sp-min", "sp-max", "random", "complete")
DEFAULT_SIZES = (8, 16, 32, 64, 128, 256, 512)


def kinds_for(kernel: str) -> tuple[str, ...]:
    return APPLICABLE_KINDS.get(kernel, GENERAL_KINDS)


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("IMSIM_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"IMSIM_SEED must be an integer, got {raw!r}") from None


def spec_for(kernel: str | None, kind: str, n: int, seed: int, max_degree=None, k=None,
             faulty=None, weighted=True, root_policy="fixed-0") -> GeneratorSpec:
    """Generator parameters with kernel-appropriate defaults filled in."""
    if kind == "tree-random" and max_degree is None:
        max_degree = 3
    if kernel == "kc" and k is None:
        k = 4
    if kernel == "by" and faulty is None:
        faulty = n // 8
    return GeneratorSpec(kind=kind, n=n, seed=seed, max_degree=max_degree, k=k,
                         weighted=weighted, root_policy=root_policy, faulty_count=faulty)


# -- parser -----------------------------------------------------------------


def _graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=None,
                   help=f"generation and run seed (default $IMSIM_SEED or {DEFAULT_SEED})")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--k", type=int, help="committee bound for kc")
    p.add_argument("--faulty", type=int, help="number of faulty nodes for by")
    p.add_argument("--weighted", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--root-policy", choices=("fixed-0", "random"), default="fixed-0")


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=("fa", "fac"), default="fa", type=str.lower)
    p.add_argument("--clusters", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--load", type=int, default=0, help="workload iterations per activation")
    p.add_argument("--adversary", choices=ADVERSARIES, default="random",
                   help="faulty-node strategy for by")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    _graph_flags(p)
    p.add_argument("--out", "-o", required=True, help="graph file to write")

    p = sub.add_parser("run", help="run one kernel")
    p.add_argument("--kernel", required=True, choices=sorted(KERNELS))
    p.add_argument("--graph", help="graph file (instead of --kind/--n)")
    _graph_flags(p)
    _engine_flags(p)
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--trace", help="per-superstep trace path (.csv or .json)")
    p.add_argument("-ver", "--verify", action="store_true", help="validate the output")

    p = sub.add_parser("validate", help="re-check a stored report")
    p.add_argument("--kernel", required=True, choices=sorted(KERNELS))
    p.add_argument("--graph", required=True)
    p.add_argument("--report", required=True)

    p = sub.add_parser("sweep", help="cross product of runs with a summary CSV")
    p.add_argument("--kernel", required=True, choices=sorted(KERNELS))
    p.add_argument("--sizes", type=_int_list, default=DEFAULT_SIZES)
    p.add_argument("--kinds", type=_str_list, default=None)
    p.add_argument("--variants", type=_str_list, default=("fa", "fac"))
    p.add_argument("--clusters", choices=("one", "all", "both"), default="one",
                   help="cluster counts per run: 1, n, or both")
    p.add_argument("--seeds", type=int, default=30, help="number of consecutive seeds")
    p.add_argument("--seed", type=int, default=None, help="first seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--load", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="concurrent child runs")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip().lower() for x in text.split(",") if x.strip())


# -- commands ---------------------------------------------------------------


def _seed(args) -> int:
    return args.seed if args.seed is not None else default_seed()


def _spec_from_args(args, kernel=None) -> GeneratorSpec:
    if args.kind is None or args.n is None:
        raise UsageError("give --kind and --n (or --graph)")
    return spec_for(kernel, args.kind, args.n, _seed(args), args.max_degree, args.k,
                    args.faulty, args.weighted, args.root_policy)


def cmd_gen(args) -> int:
    spec = _spec_from_args(args)
    g = generate(spec)
    save(g, args.out)
    print(f"n={g.n} m={g.m} kind={g.kind} seed={g.seed} -> {args.out}")
    if g.kind in ("sp-min", "sp-max"):
        other = generate(GeneratorSpec(
            kind="sp-max" if g.kind == "sp-min" else "sp-min", n=g.n, seed=g.seed))
        small, big = (g, other) if g.kind == "sp-min" else (other, g)
        ok = set(small.edges) <= set(big.edges)
        print(f"superset sp-min <= sp-max: {'ok' if ok else 'VIOLATED'}")
    return EXIT_OK


def _kernel_options(kernel, args) -> dict:
    if kernel == "by":
        return {"adversary": args.adversary}
    if kernel == "kc" and args.k is not None:
        return {"k": args.k}
    return {}


def cmd_run(args) -> int:
    if args.graph and args.kind:
        raise UsageError("--graph and --kind are mutually exclusive")
    if args.graph:
        g = load(args.graph)
        spec = None
    else:
        spec = _spec_from_args(args, args.kernel)
        g = generate(spec)
    cfg = EngineConfig(strategy=args.variant.upper(), clusters=args.clusters,
                       workers=args.workers, load_value=args.load, seed=_seed(args))
    out, metrics, trace = run(args.kernel, g, cfg, **_kernel_options(args.kernel, args))
    verdict = None
    if args.verify:
        k = args.k if args.kernel == "kc" else None
        verdict = validate(args.kernel, g, out, k=k)
    if args.trace:
        emit_trace(trace, args.trace)
    if args.report:
        emit_report(g, cfg, out, metrics, verdict, args.report, spec=spec,
                    trace_path=args.trace)
    m = metrics.to_dict()
    print(
        f"{args.kernel} n={g.n} {cfg.strategy} finishes={m['finishes']} "
        f"asyncs={m['asyncs']} barriers={m['barriers']} mutexOps={m['mutexOps']} "
        f"messagesTotal={m['messagesTotal']} messagesRemote={m['messagesRemote']} "
        f"digest={out.digest()[:16]}"
    )
    if verdict is not None:
        print(_verdict_line(verdict))
        if not verdict:
            return EXIT_INVALID
    return EXIT_OK


def _verdict_line(verdict) -> str:
    if verdict:
        return "verdict: pass"
    return f"verdict: FAIL rule={verdict.failed_rule} witness={json.dumps(verdict.witness)}"


def cmd_validate(args) -> int:
    g = load(args.graph)
    try:
        report = json.loads(Path(args.report).read_text())
        kernel, payload = report["kernel"], report["output"]
        checksum = report["checksum"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"unreadable report {args.report}: {exc}") from None
    if kernel != args.kernel:
        raise UsageError(f"report is for kernel {kernel!r}, not {args.kernel!r}")
    stored = report.get("graph-digest")
    if stored is not None and stored != digest(to_dict(g)):
        raise UsageError("report was produced for a different graph")
    out = KernelOutput(kernel, payload, checksum)
    if report.get("output-digest") not in (None, out.digest()):
        print("warning: output does not match its stored digest", file=sys.stderr)
    k = (report.get("spec") or {}).get("k")
    verdict = validate(args.kernel, g, out, k=k)
    print(_verdict_line(verdict))
    return EXIT_OK if verdict else EXIT_INVALID


def _sweep_one(job: tuple) -> dict:
    kernel, kind, n, seed, variant, clusters, workers, load_value, out_dir = job
    row = {"kernel": kernel, "kind": kind, "n": n, "seed": seed,
           "variant": variant, "clusters": clusters}
    try:
        spec = spec_for(kernel, kind, n, seed)
        g = generate(spec)
        cfg = EngineConfig(strategy=variant.upper(), clusters=clusters, workers=workers,
                           load_value=load_value, seed=seed)
        out, metrics, _ = run(kernel, g, cfg)
        verdict = validate(kernel, g, out)
        name = f"{kernel}-{kind}-n{n}-s{seed}-{variant}-c{clusters}.json"
        emit_report(g, cfg, out, metrics, verdict, Path(out_dir) / "reports" / name, spec=spec)
        row.update(metrics.to_dict())
        row["measured"] = json.dumps(metrics.measured, sort_keys=True)
        row["pass"] = verdict.passed
        row["failedRule"] = verdict.failed_rule or ""
        row["error"] = ""
    except (SimulationAbort, IncompatibleGraph, GraphError, ValueError) as exc:
        row.update({"pass": False, "failedRule": "", "error": f"{type(exc).__name__}: {exc}"})
    return row


SUMMARY_COLUMNS = ("kernel", "kind", "n", "seed", "variant", "clusters", "supersteps",
                   *COUNTERS, "measured", "pass", "failedRule", "error")


def cmd_sweep(args) -> int:
    kinds = args.kinds or kinds_for(args.kernel)
    if not args.sizes or not args.variants or not kinds or args.seeds < 1:
        raise UsageError("sweep lists must be nonempty")
    for v in args.variants:
        if v not in ("fa", "fac"):
            raise UsageError(f"unknown variant {v!r}")
    first = _seed(args)
    out_dir = Path(args.out)
    (out_dir / "reports").mkdir(parents=True, exist_ok=True)
    jobs = []
    for kind in kinds:
        for n in args.sizes:
            counts = {"one": (1,), "all": (n,), "both": (1, n)}[args.clusters]
            for seed in range(first, first + args.seeds):
                for variant in args.variants:
                    for c in dict.fromkeys(counts):
                        jobs.append((args.kernel, kind, n, seed, variant, c,
                                     args.workers, args.load, str(out_dir)))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    rows.sort(key=lambda r: (r["kind"], r["n"], r["seed"], r["variant"], r["clusters"]))
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    failed = sum(1 for r in rows if not r["pass"])
    errors = sum(1 for r in rows if r["error"])
    print(f"{len(rows)} runs, {failed} failed ({errors} errors) -> {out_dir / 'summary.csv'}")
    if errors:
        return EXIT_ABORT
    return EXIT_INVALID if failed else EXIT_OK


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "validate": cmd_validate, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, IncompatibleGraph, GraphError, PayloadMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimulationAbort as exc:
        print(f"abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
