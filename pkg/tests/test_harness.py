import json

import pytest

from contour_hcp.generate import GenSpec
from contour_hcp.graph import fixture
from contour_hcp.harness import (
    aggregate, build_specs, dump_report, parse_n_range, parse_pair, persist_counterexample,
    record, replay, run_pipeline, serialize_pair, sweep,
)


def test_run_pipeline_records_structured_failure():
    res = run_pipeline(fixture("g25"), seed=0)
    assert res.error is not None and res.error.kind
    rec = record("g25", res)
    assert rec["pipeline_error"]["kind"] == res.error.kind
    assert rec["verdict_claimed"] is None


def test_pair_serialization_roundtrip():
    res = run_pipeline(fixture("g25"), seed=2, oracle=False)
    text = serialize_pair(res.pair)
    again = parse_pair(text, res.reduced)
    assert serialize_pair(again) == text
    again.check()


def test_persist_and_replay(tmp_path):
    res = run_pipeline(fixture("petersen"), keep_weightings=True)
    d = persist_counterexample(res, tmp_path / "pet")
    assert {p.name for p in d.iterdir()} == {
        "graph.txt", "objects.txt", "weights.txt", "verdict.json", "trace.log"}
    assert replay(d) == (True, [])
    (d / "trace.log").write_text("tampered\n")
    assert replay(d) == (False, ["trace.log"])


def test_sweep_report_partition_and_determinism(tmp_path):
    specs = [GenSpec(n, cubic=True) for n in (4, 6, 8, 10)]
    a = sweep(specs, out_dir=tmp_path / "a")
    sweep(specs, out_dir=tmp_path / "b", jobs=2)
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    agg = a["aggregate"]
    assert agg["instances"] == 27
    assert agg["agreements"] + agg["disagreements"] + agg["pipeline_failures"] == agg["instances"]
    assert sum(agg["failures_by_kind"].values()) <= agg["pipeline_failures"]
    ids = [r["graph_id"] for r in a["records"]]
    assert ids == sorted(ids)
    for r in a["records"]:
        if r["agree"] is False:
            path = tmp_path / "a" / r["counterexample"]
            assert replay(path)[0]
    assert "wall_time" not in a["records"][0]


def test_timing_flag_adds_wall_time():
    report = sweep([GenSpec(4, cubic=True)], timing=True)
    assert report["records"][0]["wall_time"] >= 0


def test_aggregate_agreement_rate():
    recs = [
        {"pipeline_error": None, "agree": True, "verdict_claimed": True, "oracle_hamiltonian": True,
         "short_circuit": False, "bound_violations": []},
        {"pipeline_error": None, "agree": False, "verdict_claimed": True,
         "oracle_hamiltonian": False, "short_circuit": False, "bound_violations": []},
        {"pipeline_error": {"kind": "NonTermination", "message": ""}, "agree": None,
         "verdict_claimed": None, "oracle_hamiltonian": True, "short_circuit": False,
         "bound_violations": []},
    ]
    agg = aggregate(recs)
    assert agg["agreement_rate"] == 0.5
    assert agg["failures_by_kind"] == {"NonTermination": 1}


def test_dump_report_is_canonical():
    text = dump_report({"b": 1, "a": [1, 2]})
    assert text == json.dumps({"a": [1, 2], "b": 1}, indent=2) + "\n"


@pytest.mark.parametrize("text,expected", [
    ("4..8", [4, 5, 6, 7, 8]), ("14,16", [14, 16]), ("10", [10]), ("4..6,9", [4, 5, 6, 9]),
])
def test_parse_n_range(text, expected):
    assert parse_n_range(text) == expected


def test_build_specs_split_and_filter():
    specs = build_specs([14, 16], False, 501, False, 7)
    assert [(s.n, s.count, s.seed) for s in specs] == [(14, 251, 7), (16, 250, 7)]
    cub = build_specs(list(range(4, 13)), True, 0, True, 0)
    assert [s.n for s in cub] == [4, 6, 8, 10, 12]
