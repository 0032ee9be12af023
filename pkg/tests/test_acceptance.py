"""The thirteen acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and printed
immediately) before asserting, so a failing criterion still reports itself.
"""

import copy
import math
import time

import networkx as nx
import pytest

from imsim import EngineConfig, GeneratorSpec, generate, run
from imsim.cli import kinds_for, spec_for
from imsim.kernels import KERNELS
from imsim.metrics import trace_text
from imsim.topology import sp_max_edges
from imsim.validators import floyd_warshall, kruskal, validate

from conftest import ACCEPTANCE

SIZES = (8, 16, 32, 64)
SEEDS = range(1, 31)
ALL_KINDS = {tag: kinds_for(tag) for tag in sorted(KERNELS)}


def record(num, ok, text):
    ACCEPTANCE[num] = (bool(ok), text)
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, text


def instance(kernel, kind, n, seed):
    return generate(spec_for(kernel, kind, n, seed))


def nx_graph(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


# -- 1 + 8 share one sweep -------------------------------------------------------


@pytest.fixture(scope="module")
def sweep():
    """Every kernel x applicable kind x n x 30 seeds, FA on one cluster and FAC on n."""
    rows = []
    for kernel, kinds in ALL_KINDS.items():
        for kind in kinds:
            for n in SIZES:
                for seed in SEEDS:
                    g = instance(kernel, kind, n, seed)
                    for strategy, clusters in (("FA", 1), ("FAC", n)):
                        cfg = EngineConfig(strategy, clusters=clusters, seed=seed)
                        out, m, trace = run(kernel, g, cfg)
                        rows.append((kernel, kind, n, seed, strategy, clusters,
                                     validate(kernel, g, out), m, trace))
    return rows


def test_1_correctness_sweep(sweep):
    bad = [r[:6] + (r[6].failed_rule,) for r in sweep if not r[6]]
    record(1, not bad and len({r[0] for r in sweep}) == 12,
           f"{len(sweep)} runs across 12 kernels, FA and FAC: {len(bad)} failing verdicts"
           + (f" (first {bad[0]})" if bad else ""))


def test_8_cluster_accounting(sweep):
    bad = []
    for kernel, kind, n, seed, strategy, clusters, _, m, trace in sweep:
        if clusters == 1:
            ok = m.messages_remote == 0 and all(r.messages_remote == 0 for r in trace)
        else:
            ok = m.messages_remote == m.messages_total and all(
                r.messages_remote == r.messages_total for r in trace)
        if not ok:
            bad.append((kernel, kind, n, seed, clusters))
    record(8, not bad, f"remote-message accounting on {len(sweep)} sweep runs: {len(bad)} violations")


# -- 2 ----------------------------------------------------------------------------


def formula(kernel, m, g):
    x = m.measured
    return {
        "lcr": lambda: 2 * g.n + 1,
        "bf": lambda: 2 * x["D"],
        "by": lambda: (x["t"] + 1) * (2 * x["D"] + 1),
        "kc": lambda: 5 * x["k"] ** 2,
        "mis": lambda: 4 * x["R"] + 1,
        "ds": lambda: 9 * x["R"],
        "dr": lambda: 1,
        "vc": lambda: 2 * x["L"] + 9,
    }[kernel]()


def test_2_count_formulas():
    checked, bad = 0, []
    for kernel in ("lcr", "bf", "by", "kc", "mis", "ds", "dr", "vc"):
        for kind in ALL_KINDS[kernel]:
            for n in SIZES:
                for seed in range(1, 11):
                    g = instance(kernel, kind, n, seed)
                    _, m, _ = run(kernel, g, EngineConfig("FA", seed=seed))
                    checked += 1
                    if m.finishes != formula(kernel, m, g):
                        bad.append((kernel, kind, n, seed, m.finishes))
                    if kernel == "bf":
                        ecc = nx.eccentricity(nx_graph(g), g.root)
                        if m.measured["D"] != ecc:
                            bad.append((kernel, kind, n, seed, "D", m.measured["D"], ecc))
    # spot checks at n = 512
    for kernel, kind in (("lcr", "ring-uni"), ("bf", "sp-min"), ("bf", "sp-max")):
        g = instance(kernel, kind, 512, 101)
        _, m, _ = run(kernel, g, EngineConfig("FA"))
        checked += 1
        if m.finishes != formula(kernel, m, g):
            bad.append((kernel, kind, 512, m.finishes))
    record(2, not bad, f"FA finish formulas on {checked} runs (incl. n=512 LCR/BF): {len(bad)} mismatches")


# -- 3 ----------------------------------------------------------------------------


def test_3_caption_rule():
    runs, bad = 0, []
    for kernel, kinds in ALL_KINDS.items():
        for kind in kinds:
            for n in (8, 32):
                for seed in range(1, 6):
                    g = instance(kernel, kind, n, seed)
                    _, m, _ = run(kernel, g, EngineConfig("FA", seed=seed))
                    runs += 1
                    if m.asyncs != n * m.finishes or m.barriers != 0:
                        bad.append((kernel, kind, n, seed))
    record(3, not bad, f"asyncs = n x finishes on {runs} FA runs: {len(bad)} violations")


# -- 4 ----------------------------------------------------------------------------


def test_4_fac_relations():
    runs, bad = 0, []
    for kind in ALL_KINDS["vc"]:
        for n in SIZES:
            for seed in range(1, 11):
                g = instance("vc", kind, n, seed)
                _, m, _ = run("vc", g, EngineConfig("FAC", seed=seed))
                L = m.measured["L"]
                runs += 1
                if (m.finishes, m.barriers) != (L + 6, L + 3):
                    bad.append(("vc", kind, n, seed, m.finishes, m.barriers, L))
    for n in SIZES + (128,):
        g = instance("lcr", "ring-uni", n, 101)
        _, m, _ = run("lcr", g, EngineConfig("FAC"))
        runs += 1
        if (m.finishes, m.barriers) != (n + 1, n + 1):
            bad.append(("lcr", n, m.finishes, m.barriers))
    record(4, not bad, f"FAC finishes/barriers for VC (L+6, L+3) and LCR (n+1, n+1) on {runs} runs: "
           f"{len(bad)} mismatches")


# -- 5 ----------------------------------------------------------------------------


def test_5_message_counts():
    bad, runs = [], 0
    for p in range(3, 10):
        n = 2 ** p
        _, m, _ = run("lcr", instance("lcr", "ring-uni", n, 101), EngineConfig())
        runs += 1
        if m.messages_total != n * n:
            bad.append(("lcr", n, m.messages_total))
        ceiling = 8 * n * (math.ceil(math.log2(n)) + 1)
        for seed in range(1, 31 if n <= 64 else 6):
            g = instance("hs", "ring-bi", n, seed)
            out, m, _ = run("hs", g, EngineConfig(seed=seed))
            runs += 1
            if m.messages_total > ceiling or not validate("hs", g, out):
                bad.append(("hs", n, seed, m.messages_total, ceiling))
    record(5, not bad, f"LCR = n^2 and HS <= 8n(ceil(log2 n)+1) for n = 8..512 ({runs} runs): "
           f"{len(bad)} violations")


# -- 6 ----------------------------------------------------------------------------


def fingerprint(result):
    out, m, trace = result
    return out.digest(), m.to_dict(), trace_text(trace, "csv").encode()


def test_6_determinism():
    bad = []
    for kernel, kinds in ALL_KINDS.items():
        g = instance(kernel, kinds[-1], 32, 7)
        prints = [
            fingerprint(run(kernel, g, EngineConfig("FA", workers=w, clusters=4, seed=7)))
            for w in (1, 4, 8)
            for _ in range(3)
        ]
        if any(p != prints[0] for p in prints):
            bad.append(kernel)
    record(6, not bad, f"12 kernels x workers {{1,4,8}} x 3 repeats give identical digest, "
           f"metrics and trace bytes: {len(bad)} kernels differ {bad or ''}")


# -- 7 ----------------------------------------------------------------------------


def test_7_strategy_equivalence():
    bad = []
    for kernel, kinds in ALL_KINDS.items():
        for seed in range(1, 11):
            g = instance(kernel, kinds[seed % len(kinds)], 32, seed)
            fa = run(kernel, g, EngineConfig("FA", seed=seed)).output
            fac = run(kernel, g, EngineConfig("FAC", seed=seed)).output
            if fa != fac:
                bad.append((kernel, seed))
    record(7, not bad, f"FA and FAC outputs identical on 10 seeds x 12 kernels: {len(bad)} differ")


# -- 9 ----------------------------------------------------------------------------


def test_9_oracle_equivalence():
    bad, runs = [], 0
    for seed in SEEDS:
        for kind in ("sp-min", "sp-max", "random", "complete"):
            n = (8, 16, 32, 64)[seed % 4]
            g = instance("dr", kind, n, seed)
            G = nx_graph(g)
            for (u, v), w in zip(g.edges, g.weights):
                G[u][v]["weight"] = w

            dist = run("bf", g, EngineConfig(seed=seed)).output.payload["distance"]
            ref = nx.single_source_shortest_path_length(G, g.root)
            bad += [("bf", kind, n, seed)] if dist != [ref[v] for v in range(n)] else []

            table = run("dr", g, EngineConfig(seed=seed)).output.payload["table"]
            fw = floyd_warshall(g)
            apsp = dict(nx.all_pairs_dijkstra_path_length(G))
            ok = all(table[u][d]["cost"] == fw[u, d] == apsp[u][d]
                     for u in range(n) for d in range(n))
            bad += [("dr", kind, n, seed)] if not ok else []

            edges = {tuple(e) for e in run("mst", g, EngineConfig(seed=seed)).output.payload["edges"]}
            nx_mst = {tuple(sorted(e)) for e in nx.minimum_spanning_tree(G).edges}
            bad += [("mst", kind, n, seed)] if not edges == kruskal(g) == nx_mst else []

            diam = run("dp", g, EngineConfig(seed=seed)).output.payload["diameter"]
            bad += [("dp", kind, n, seed)] if set(diam) != {nx.diameter(G)} else []
            runs += 4
    record(9, not bad, f"BF/DR/MST/DP equal BFS, Floyd-Warshall, Kruskal, all-pairs-BFS on "
           f"{runs} runs (n <= 64): {len(bad)} mismatches")


# -- 10 ---------------------------------------------------------------------------


def test_10_generator_contracts():
    bad = []
    for seed in range(100):
        for n in (8, 16, 33, 64):
            lo = generate(GeneratorSpec("sp-min", n, seed))
            hi = generate(GeneratorSpec("sp-max", n, seed))
            if lo.m != n - 1 or hi.m != sp_max_edges(n) or not set(lo.edges) <= set(hi.edges):
                bad.append(("sparse", n, seed))
            tr = generate(GeneratorSpec("tree-random", n, seed, max_degree=3))
            if max(len(a) for a in tr.adjacency) > 3 or not nx.is_tree(nx_graph(tr)):
                bad.append(("tree-random", n, seed))
            for g in (lo, hi, tr, generate(GeneratorSpec("random", n, seed))):
                if len(set(g.uids)) != n:
                    bad.append(("uids", g.kind, n, seed))
    record(10, not bad, f"sp-min/sp-max edge counts and superset, tree-random degree, uid "
           f"distinctness over 100 seeds: {len(bad)} violations")


# -- 11 ---------------------------------------------------------------------------


def test_11_byzantine_resilience():
    bad, runs = [], 0
    kinds = ALL_KINDS["by"]
    for adversary in ("constant-0", "constant-1", "random"):
        for n in (16, 32, 64):
            for seed in SEEDS:
                g = instance("by", kinds[seed % len(kinds)], n, seed)
                assert len(g.faulty) == n // 8
                out, _, _ = run("by", g, EngineConfig(seed=seed), adversary=adversary)
                runs += 1
                good = {out.payload["decision"][v] for v in range(n) if v not in g.faulty}
                if len(good) != 1:
                    bad.append((adversary, n, seed))
    record(11, not bad, f"t = n/8 faulty nodes, 3 adversaries, n in {{16,32,64}}, 30 seeds "
           f"({runs} runs): {len(bad)} disagreements")


# -- 12 ---------------------------------------------------------------------------


def test_12_workload():
    bad = []
    for n in (8, 32):
        g = instance("lcr", "ring-uni", n, 101)
        for load in (0, 3):
            out, m, _ = run("lcr", g, EngineConfig(load_value=load))
            if out.checksum != m.supersteps * (n * (n - 1) // 2 + n * load):
                bad.append((n, load, out.checksum))
    g = instance("lcr", "ring-uni", 32, 101)
    run("lcr", g, EngineConfig(load_value=10))  # compile outside the timing

    def elapsed(load):
        best = math.inf
        for _ in range(2):
            t = time.perf_counter()
            run("lcr", g, EngineConfig(load_value=load))
            best = min(best, time.perf_counter() - t)
        return best

    t1, t2 = elapsed(10**6), elapsed(2 * 10**6)
    ratio = t2 / t1
    ok = not bad and 1.5 <= ratio <= 2.5
    record(12, ok, f"checksum closed form ({len(bad)} mismatches); LCR n=32 runtime "
           f"{t1:.2f}s -> {t2:.2f}s, ratio {ratio:.2f} (want 1.5..2.5)")


# -- 13 ---------------------------------------------------------------------------


def _mutate(kernel, g, payload):
    """One-field corruption of a passing payload."""
    p = copy.deepcopy(payload)
    if kernel == "bf":
        p["distance"][-1] += 1
    elif kernel == "dst":
        v = next(v for v in range(g.n) if v != g.root)
        p["parent"][v] = v
    elif kernel == "by":
        v = next(v for v in range(g.n) if v not in g.faulty)
        p["decision"][v] = 1 - p["decision"][v]
    elif kernel == "dr":
        p["table"][0][g.n - 1]["cost"] += 1
    elif kernel == "ds":
        v = p["color"].index("Black")
        p["color"][v] = "White"
    elif kernel == "kc":
        p["committee"][0] = max(g.uids) + 1
    elif kernel == "mis":
        v = p["inMIS"].index(True)
        p["inMIS"][v] = False
    elif kernel in ("lcr", "hs", "dp"):
        p["leaderId"][0] -= 1
    elif kernel == "mst":
        p["edges"].pop()
    elif kernel == "vc":
        u, v = g.edges[0]
        p["color"][u] = p["color"][v]
    return p


def test_13_mutation_killing():
    bad, killed = [], 0
    for kernel, kinds in ALL_KINDS.items():
        for seed in range(1, 6):
            g = instance(kernel, kinds[0], 16, seed)
            out = run(kernel, g, EngineConfig(seed=seed)).output
            assert validate(kernel, g, out)
            mutant = out.to_dict()
            mutant["payload"] = _mutate(kernel, g, out.payload)
            if validate(kernel, g, mutant):
                bad.append((kernel, seed))
            else:
                killed += 1
    if "dp" in KERNELS:
        g = instance("dp", "sp-min", 16, 1)
        out = run("dp", g).output.to_dict()
        out["payload"]["diameter"][3] += 1
        if validate("dp", g, out):
            bad.append(("dp-diameter", 1))
        else:
            killed += 1
    record(13, not bad, f"{killed} single-field mutants rejected across 12 kernels; "
           f"{len(bad)} survived {bad or ''}")
