import csv
import json

import pytest

from imsim.cli import main


def test_gen_sp_min(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert main(["gen", "--kind", "sp-min", "--n", "8", "--seed", "101", "--out", str(path)]) == 0
    assert len(json.loads(path.read_text())["edges"]) == 7
    assert "superset" in capsys.readouterr().out


def test_gen_is_idempotent(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        main(["gen", "--kind", "random", "--n", "20", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_gen_single_node_ring(tmp_path, capsys):
    assert main(["gen", "--kind", "ring-uni", "--n", "1", "--out", str(tmp_path / "r")]) == 2
    assert "n >= 2" in capsys.readouterr().err


def test_run_lcr_report(tmp_path):
    rep = tmp_path / "r.json"
    code = main(["run", "--kernel", "lcr", "--kind", "ring-uni", "--n", "64", "--variant", "fa",
                 "--clusters", "64", "--verify", "--report", str(rep)])
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["metrics"]["finishes"] == 129
    assert report["metrics"]["messagesRemote"] == 4096


def test_run_short_verify_flag(capsys):
    assert main(["run", "--kernel", "bf", "--kind", "sp-min", "--n", "16", "-ver"]) == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_run_vc_on_ring(tmp_path, capsys):
    g = tmp_path / "ring.json"
    main(["gen", "--kind", "ring-bi", "--n", "8", "--out", str(g)])
    assert main(["run", "--kernel", "vc", "--graph", str(g)]) == 2
    assert "kernel requires tree" in capsys.readouterr().err


def test_run_mis_twice_same_digest(tmp_path):
    reports = [tmp_path / "a.json", tmp_path / "b.json"]
    for r in reports:
        main(["run", "--kernel", "mis", "--kind", "random", "--n", "32", "--seed", "7",
              "--report", str(r)])
    digests = {json.loads(r.read_text())["output-digest"] for r in reports}
    assert len(digests) == 1


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("IMSIM_SEED", "7")
    r = tmp_path / "r.json"
    main(["run", "--kernel", "bf", "--kind", "sp-min", "--n", "8", "--report", str(r)])
    report = json.loads(r.read_text())
    assert report["spec"]["seed"] == report["config"]["seed"] == 7


def test_trace_written(tmp_path):
    t = tmp_path / "t.csv"
    main(["run", "--kernel", "bf", "--kind", "sp-min", "--n", "16", "--trace", str(t)])
    assert t.read_text().startswith("round,messagesTotal")


def test_usage_errors(tmp_path):
    assert main(["run", "--kernel", "bf"]) == 2
    assert main(["run", "--kernel", "nope", "--kind", "sp-min", "--n", "8"]) == 2
    assert main(["run", "--kernel", "bf", "--kind", "sp-min", "--n", "8", "--clusters", "9"]) == 2


def _stored_run(tmp_path, kernel="bf", kind="sp-min"):
    g, r = tmp_path / "g.json", tmp_path / "r.json"
    main(["gen", "--kind", kind, "--n", "16", "--out", str(g)])
    main(["run", "--kernel", kernel, "--graph", str(g), "--report", str(r)])
    return g, r


def test_validate_round_trip(tmp_path, capsys):
    g, r = _stored_run(tmp_path)
    assert main(["validate", "--kernel", "bf", "--graph", str(g), "--report", str(r)]) == 0


def test_validate_corrupted_distance(tmp_path, capsys):
    g, r = _stored_run(tmp_path)
    report = json.loads(r.read_text())
    report["output"]["distance"][5] += 1
    r.write_text(json.dumps(report))
    assert main(["validate", "--kernel", "bf", "--graph", str(g), "--report", str(r)]) == 1
    assert "rule=distance" in capsys.readouterr().out


def test_validate_cross_kernel(tmp_path, capsys):
    g, r = _stored_run(tmp_path)
    assert main(["validate", "--kernel", "vc", "--graph", str(g), "--report", str(r)]) == 2


def test_validate_other_graph(tmp_path):
    g, r = _stored_run(tmp_path)
    other = tmp_path / "o.json"
    main(["gen", "--kind", "sp-min", "--n", "16", "--seed", "5", "--out", str(other)])
    assert main(["validate", "--kernel", "bf", "--graph", str(other), "--report", str(r)]) == 2


def test_sweep_lcr_finishes(tmp_path):
    code = main(["sweep", "--kernel", "lcr", "--sizes", "8,16,32,64", "--seeds", "2",
                 "--variants", "fa", "--out", str(tmp_path)])
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "summary.csv").open()))
    assert len(rows) == 8
    assert all(int(r["finishes"]) == 2 * int(r["n"]) + 1 for r in rows)


def test_sweep_bf_cluster_columns(tmp_path):
    main(["sweep", "--kernel", "bf", "--sizes", "8,16", "--seeds", "2", "--kinds", "sp-max",
          "--clusters", "both", "--out", str(tmp_path)])
    for r in csv.DictReader((tmp_path / "summary.csv").open()):
        if r["clusters"] == "1":
            assert r["messagesRemote"] == "0"
        else:
            assert r["messagesRemote"] == r["messagesTotal"]


def test_sweep_records_failures(tmp_path):
    # sp-max cannot be built at n=4: the run is recorded and the sweep still finishes
    code = main(["sweep", "--kernel", "bf", "--sizes", "4,8", "--seeds", "1", "--kinds", "sp-max",
                 "--out", str(tmp_path)])
    assert code == 3
    rows = list(csv.DictReader((tmp_path / "summary.csv").open()))
    assert len(rows) == 4
    assert sum(1 for r in rows if r["error"]) == 2


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_sweep_mis_passes(tmp_path, jobs):
    code = main(["sweep", "--kernel", "mis", "--sizes", "32", "--seeds", "30", "--kinds", "random",
                 "--variants", "fa", "--jobs", jobs, "--out", str(tmp_path)])
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "summary.csv").open()))
    assert len(rows) == 30 and all(r["pass"] == "True" for r in rows)
