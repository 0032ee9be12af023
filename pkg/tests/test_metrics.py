import csv
import json

import pytest

from imsim import EngineConfig, Metrics, generate, run
from imsim.metrics import (
    COUNTERS,
    TRACE_COLUMNS,
    emit_report,
    emit_trace,
    read_trace,
    totals,
    trace_text,
)
from imsim.validators import validate

from conftest import make


def _camel(metrics):
    d = metrics.to_dict()
    return {c: d[c] for c in COUNTERS}


def test_trace_conservation():
    g = make("random", 32)
    for tag in ("bf", "mis", "mst", "ds"):
        for strategy in ("FA", "FAC"):
            _, m, trace = run(tag, g, EngineConfig(strategy, clusters=4))
            assert len(trace) == m.supersteps
            assert totals(trace) == _camel(m)


def test_csv_header_and_sums(tmp_path):
    g = make("sp-min", 16)
    _, m, trace = run("bf", g)
    path = tmp_path / "t.csv"
    emit_trace(trace, path)
    rows = list(csv.DictReader(path.open()))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert [int(r["round"]) for r in rows] == list(range(m.supersteps))
    assert sum(int(r["messagesTotal"]) for r in rows) == m.messages_total
    assert read_trace(path) == trace


def test_json_trace_round_trip(tmp_path):
    _, _, trace = run("lcr", make("ring-uni", 8))
    path = tmp_path / "t.json"
    emit_trace(trace, path)
    assert json.loads(path.read_text())[0] == trace[0].to_dict()
    assert read_trace(path) == trace


def test_unknown_trace_format():
    with pytest.raises(ValueError):
        trace_text([], "xml")


def test_fa_caption_rule_and_no_barriers():
    g = make("complete", 12, kernel="kc")
    for tag in ("bf", "mis", "ds", "kc", "dp"):
        _, m, _ = run(tag, g, EngineConfig("FA"))
        assert m.asyncs == 12 * m.finishes
        assert m.barriers == 0


def test_reports_are_byte_identical(tmp_path):
    g = make("ring-uni", 64)
    cfg = EngineConfig("FA", clusters=64)
    paths = []
    for name in ("a.json", "b.json"):
        o, m, _ = run("lcr", g, cfg)
        emit_report(g, cfg, o, m, validate("lcr", g, o), tmp_path / name)
        paths.append(tmp_path / name)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    report = json.loads(paths[0].read_text())
    assert report["metrics"]["finishes"] == 129
    assert report["metrics"]["messagesTotal"] == 4096
    assert report["metrics"]["asyncs"] // report["metrics"]["finishes"] == 64
    assert report["verdict"]["pass"] is True
    assert report["spec"]["kind"] == "ring-uni"
    assert report["config"]["clusters"] == 64


def test_metrics_dict_round_trip():
    _, m, _ = run("bf", make("sp-max", 16))
    assert Metrics.from_dict(m.to_dict()) == m
