"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in an
"acceptance criteria" section at the end of the pytest output.
"""

import random
import time
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

import test_objects as T
from acceptance_log import report
from contour_hcp.cli import main as cli_main
from contour_hcp.construction import apply_restrictions, preliminary_second, second_blocks
from contour_hcp.errors import NoEligibleNode, PipelineError
from contour_hcp.generate import GenSpec, cubic_classes, generate, subcubic_classes
from contour_hcp.graph import G25_FIRST_CONTOUR, fixture, parse_edge_list, serialize_edge_list
from contour_hcp.harness import build_specs, persist_counterexample, replay, run_pipeline, sweep
from contour_hcp.objects import contour_tokens, initial_object
from contour_hcp.oracle import find_hamiltonian, naive_hamiltonian
from contour_hcp.weighting import (
    assign_weights, correct, enumerate_choices, interior_sum, pair_constraints,
)
from objgen import random_object
from test_construction import PRELIM_TOKENS, REMOVED, blocks_of, cyclic_equal
from test_weighting import check_single

CUBIC_NS = (4, 6, 8, 10, 12)
CHOICES_PER_INSTANCE = 256


def test_fixture_fidelity():
    start = time.perf_counter()
    g = parse_edge_list(serialize_edge_list(fixture("g25")))
    o = initial_object(g, G25_FIRST_CONTOUR)
    elapsed = time.perf_counter() - start
    ok = (g.n == 25 and len(g.edges) == 37 and g.degree(25) == 2
          and o.windows == {(2, 6), (10, 18), (14, 25)}
          and set(o.free_edges) == {(22, 24), (9, 12), (8, 15), (17, 23)}
          and len(o.segments) == 3)
    assert report("fixture fidelity", ok, elapsed, 0.1,
                  f"n={g.n} m={len(g.edges)} windows={sorted(o.windows)}")


def test_preliminary_contour_fidelity():
    first = initial_object(fixture("g25"), G25_FIRST_CONTOUR)
    start = time.perf_counter()
    default = second_blocks(first)
    preliminary_second(first)
    hinted = preliminary_second(first, blocks_of(PRELIM_TOKENS))
    restricted = apply_restrictions(hinted, first)
    elapsed = time.perf_counter() - start
    canon = lambda bs: sorted(tuple(min(b, b[::-1])) for b in bs)  # noqa: E731
    same_blocks = canon(default) == canon(blocks_of(PRELIM_TOKENS))
    exact = cyclic_equal(" ".join(contour_tokens(hinted.object)), PRELIM_TOKENS)
    removed = restricted.removed_interior == frozenset(REMOVED)
    assert report("preliminary contour", same_blocks and exact and removed, elapsed, 0.1,
                  f"default-order blocks match={same_blocks}; exact tokens with the worked "
                  f"block order={exact}; removed set exact={removed}")


def test_transformation_suite():
    start = time.perf_counter()
    for case in T.CASES:
        T.test_case_before_after(case)
    T.test_random_applications_preserve_invariants()
    elapsed = time.perf_counter() - start
    assert report("transformation suite", True, elapsed, 10,
                  f"{len(T.CASES)} before/after cases, 1000 random applications each")


def test_window_bound(tmp_path):
    start = time.perf_counter()
    checked, violations = 0, []
    for n in CUBIC_NS:
        for gid, g in generate(GenSpec(n, cubic=True)):
            res = run_pipeline(g, oracle=False, snapshots=True)
            checked += res.bound_checked
            if res.bound_violations:
                violations.append(gid)
                persist_counterexample(res, tmp_path / gid)
    elapsed = time.perf_counter() - start
    assert report("window bound", checked > 0 and not violations, elapsed, 120,
                  f"{checked} link-free degenerate-free objects checked, "
                  f"{len(violations)} violations {violations[:5]}")


def _weighting_pairs():
    for n in CUBIC_NS:
        for _, g in generate(GenSpec(n, cubic=True)):
            yield run_pipeline(g, oracle=False).pair
    for spec in build_specs([14, 16], False, 200, False, 0):
        for _, g in generate(spec):
            yield run_pipeline(g, oracle=False).pair


def test_weighting_properties():
    start = time.perf_counter()
    instances = weightings = corrected = 0
    bad = []
    for pair in _weighting_pairs():
        if pair is None:
            continue
        instances += 1
        cons = pair_constraints(pair)
        common = cons.subgraph.common_nodes
        for choice in enumerate_choices(pair, constraints=cons)[:CHOICES_PER_INSTANCE]:
            w1, w2 = assign_weights(pair, choice)
            weightings += 1
            for w, obj in ((w1, pair.first), (w2, pair.second)):
                if set(w.half_weights) != set(obj.graph.nodes) or \
                        set(w.half_weights.values()) - {1, -1}:
                    bad.append("node weight outside +-0.5")
            if any(w1.pair(*e) != w2.pair(*e) for e in cons.subgraph.common_edges):
                bad.append("common edge weights differ")
            try:
                c1, c2 = correct(pair.first, w1, common), correct(pair.second, w2, common)
            except NoEligibleNode:
                continue
            corrected += 1
            if interior_sum(pair.first, c1) or interior_sum(pair.second, c2):
                bad.append("interior sum nonzero after correct")
            if any(c1.pair(*e) != c2.pair(*e) for e in cons.subgraph.common_edges):
                bad.append("common edge weights differ after correct")
    parity = {0: 0, 1: 0}
    rng = random.Random(2)
    while sum(parity.values()) < 200:
        o = random_object(rng, rng.randint(5, 15), rng.randint(0, 3))
        if o is None:
            continue
        m, n = rng.choice(o.pairs)
        try:
            check_single(o, m, n)
        except AssertionError:
            bad.append(f"select_single postcondition on N={len(o.contour)}")
        parity[len(o.contour) % 2] += 1
    elapsed = time.perf_counter() - start
    ok = not bad and weightings > 0 and min(parity.values()) > 0
    assert report("weighting properties", ok, elapsed, 60,
                  f"{instances} pairs, {weightings} weightings ({corrected} corrected), "
                  f"select_single odd/even N = {parity[1]}/{parity[0]}, problems={bad[:3]}")


def test_oracle_soundness():
    start = time.perf_counter()
    compared, mismatches, invalid = 0, 0, 0
    small = [g for n in (4, 6, 8) for g in cubic_classes(n)]
    small += [g for n in range(4, 9) for g in subcubic_classes(n)]
    for g in small:
        fast = find_hamiltonian(g)
        compared += 1
        mismatches += (fast is None) != (naive_hamiltonian(g) is None)
        invalid += fast is not None and not fast.validate(g)
    fixtures_ok = find_hamiltonian(fixture("petersen")) is None
    for name in ("k4", "prism3", "prism4", "prism5", "prism6"):
        cert = find_hamiltonian(fixture(name))
        fixtures_ok &= cert is not None and cert.validate(fixture(name))
    elapsed = time.perf_counter() - start
    assert report("oracle soundness", not mismatches and not invalid and fixtures_ok,
                  elapsed, 60, f"{compared} instances with n<=8 compared with the naive "
                  f"oracle, {mismatches} mismatches, {invalid} invalid certificates")


def _sweep_specs():
    specs = build_specs(list(CUBIC_NS), True, 0, True, 0)
    return specs + build_specs([14, 16], False, 500, False, 0)


def test_end_to_end_sweep(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "sweep"
    try:
        result = sweep(_sweep_specs(), seed=0, out_dir=out)
        infra = None
    except Exception as exc:  # anything escaping the harness is an infrastructure failure
        result, infra = None, repr(exc)
    assert infra is None, infra
    records = {r["graph_id"]: r for r in result["records"]}
    pair_problems = 0
    for spec in _sweep_specs():
        for gid, g in generate(spec):
            res = run_pipeline(g, oracle=False)
            if res.pair is not None:
                try:
                    res.pair.check()
                except PipelineError:
                    pair_problems += 1
            elif res.error is None and not res.short_circuit:
                pair_problems += 1
            if (res.error is None) != (records[gid]["pipeline_error"] is None
                                      or records[gid]["pipeline_error"]["kind"] == "BudgetExhausted"):
                pair_problems += 1
    disagreements = [r for r in result["records"] if r["agree"] is False]
    replays = [replay(out / r["counterexample"])[0] for r in disagreements]
    elapsed = time.perf_counter() - start
    agg = result["aggregate"]
    ok = (pair_problems == 0 and agg["agreement_rate"] is not None
          and len(replays) == agg["disagreements"] and all(replays))
    assert report("end-to-end sweep", ok, elapsed, 600,
                  f"{agg['instances']} instances, agreement rate {agg['agreement_rate']} "
                  f"({agg['agreements']} agree, {agg['disagreements']} disagree, "
                  f"{agg['pipeline_failures']} structured failures {agg['failures_by_kind']}), "
                  f"{sum(replays)}/{len(replays)} counterexamples replayed byte-for-byte")


def _cli(argv):
    buf = StringIO()
    with redirect_stdout(buf):
        rc = cli_main(argv)
    return rc, buf.getvalue()


def _tree(path: Path) -> dict:
    return {str(p.relative_to(path)): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


def test_determinism(tmp_path):
    start = time.perf_counter()
    commands = [
        ["fixtures", "--show", "g25"],
        ["oracle", "--fixture", "petersen"],
        ["decide", "--fixture", "g25", "--seed", "2", "--oracle"],
        ["decide", "--fixture", "prism5", "--seed", "9"],
        ["construct", "--fixture", "g25", "--seed", "4", "--dot", "--out", "{out}/construct"],
        ["sweep", "--n", "4..10", "--exhaustive", "--cubic", "--out", "{out}/cubic"],
        ["sweep", "--n", "14,16", "--random", "60", "--seed", "5", "--out", "{out}/random",
         "--jobs", "{jobs}"],
    ]
    runs = []
    for k, jobs in enumerate((1, 2)):
        out = tmp_path / f"run{k}"
        outputs = [_cli([a.format(out=out, jobs=jobs) for a in cmd]) for cmd in commands]
        runs.append((outputs, _tree(out)))
    differing = [" ".join(cmd) for cmd, a, b in zip(commands, runs[0][0], runs[1][0]) if a != b]
    files_equal = runs[0][1] == runs[1][1]
    elapsed = time.perf_counter() - start
    assert report("determinism", not differing and files_equal, elapsed, 120,
                  f"{len(commands)} commands run twice, {len(runs[0][1])} output files, "
                  f"differing stdout: {differing or 'none'}")
