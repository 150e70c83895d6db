"""End-to-end pipeline, sweeps, counterexample persistence and replay."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .construction import (
    ObjectPair,
    Recorder,
    apply_restrictions,
    complete_second,
    construct_first,
    guard_limit,
    preliminary_second,
)
from .decision import Verdict, decide, parameters
from .errors import BudgetExhausted, PipelineError, PreconditionViolated, PureCycle
from .generate import GenSpec, generate
from .graph import Graph, contract_degree2_chains, parse_edge_list, serialize_edge_list
from .objects import BasicObject, check_window_bound, dfs_order, parse_object, serialize_object
from .oracle import DEFAULT_BUDGET, find_hamiltonian
from .weighting import serialize_weighting

MAX_PERSISTED_CHOICES = 256


@dataclass
class PipelineResult:
    graph: Graph
    seed: int
    reduced: Graph | None = None
    first: BasicObject | None = None
    pair: ObjectPair | None = None
    verdict: Verdict | None = None
    error: PipelineError | None = None
    oracle_hamiltonian: bool | None = None
    oracle_error: str | None = None
    certificate: tuple | None = None
    short_circuit: bool = False
    recorder: Recorder = field(default_factory=Recorder)
    bound_checked: int = 0
    bound_violations: list = field(default_factory=list)

    @property
    def claimed(self) -> bool | None:
        return self.verdict.hamiltonian_claimed if self.verdict else None

    @property
    def agree(self) -> bool | None:
        if self.claimed is None or self.oracle_hamiltonian is None:
            return None
        return self.claimed == self.oracle_hamiltonian

    @property
    def trace(self) -> str:
        return "".join(line + "\n" for line in self.recorder.lines)


def initial_order(g: Graph, seed: int):
    """Seed 0 keeps the plain depth-first order; other seeds shuffle neighbours."""
    return dfs_order(g, rng=random.Random(seed) if seed else None)


def _bound_check(res: PipelineResult, objs) -> None:
    if not res.graph.is_cubic():
        return
    for label, obj in objs:
        try:
            ok = check_window_bound(obj)
        except PreconditionViolated:
            continue
        res.bound_checked += 1
        if not ok:
            res.bound_violations.append(
                f"{label}: {len(obj.segments)} segments > {obj.graph.n // 6}")


def run_pipeline(g: Graph, seed: int = 0, oracle: bool = True, snapshots: bool = False,
                 keep_weightings: bool = False, oracle_budget: int = DEFAULT_BUDGET) -> PipelineResult:
    res = PipelineResult(g, seed)
    rec = res.recorder
    rec.snapshots = [] if snapshots else None
    try:
        reduced, cmap = contract_degree2_chains(g)
    except PureCycle:
        rec.note("short-circuit: graph is a single cycle")
        res.short_circuit = True
        res.verdict = Verdict(hamiltonian_claimed=True, short_circuit=True)
        reduced, cmap = None, None
    if reduced is not None:
        res.reduced = reduced
        rec.limit = guard_limit(reduced)
        if reduced.n != g.n:
            rec.note(f"contracted {g.n} nodes to {reduced.n}")
        try:
            first = construct_first(reduced, initial_order(reduced, seed), rec)
            res.first = first
            if not first.windows:
                rec.note("short-circuit: first contour has no windows")
                res.short_circuit = True
                res.verdict = Verdict(hamiltonian_claimed=True, short_circuit=True)
                res.certificate = tuple(cmap.lift_cycle(first.contour))
            else:
                prelim = preliminary_second(first)
                rec.note(f"second preliminary windows={len(prelim.object.windows)}", prelim.object)
                restricted = apply_restrictions(prelim, first, rec)
                pair = complete_second(restricted, first, rec)
                res.pair = pair
                _bound_check(res, [("first", pair.first), ("second", pair.second)])
                res.verdict = decide(pair, counters=rec.counters, keep_weightings=keep_weightings)
                v = res.verdict
                rec.note(f"verdict claimed={v.hamiltonian_claimed} L1={v.L1} S1={v.S1} "
                         f"L2={v.L2} S2={v.S2} choices={v.choices_tried}")
        except PipelineError as exc:
            res.error = exc
            rec.note(f"pipeline error {exc.kind}: {exc}")
        if snapshots:
            _bound_check(res, [(text, o) for text, o in rec.snapshots
                               if not o.links and o.work_edges == o.graph.edges])
    if oracle:
        try:
            cert = find_hamiltonian(g, oracle_budget)
            res.oracle_hamiltonian = cert is not None
            if cert is not None and res.certificate is None:
                res.certificate = cert.order
        except BudgetExhausted as exc:
            res.oracle_error = str(exc)
    return res


# --- serialization ---------------------------------------------------------

def serialize_pair(pair: ObjectPair) -> str:
    return ("object 1\n" + serialize_object(pair.first)
            + "object 2\n" + serialize_object(pair.second))


def parse_pair(text: str, g: Graph) -> ObjectPair:
    blocks = {}
    current = None
    for line in text.splitlines():
        if line.startswith("object "):
            current = int(line.split()[1])
            blocks[current] = []
        elif current is not None:
            blocks[current].append(line)
    return ObjectPair(parse_object("\n".join(blocks[1]), g),
                      parse_object("\n".join(blocks[2]), g))


def record(graph_id: str, res: PipelineResult, timing: float | None = None) -> dict:
    v = res.verdict
    rec = {
        "graph_id": graph_id,
        "n": res.graph.n,
        "m": len(res.graph.edges),
        "seed": res.seed,
        "verdict_claimed": res.claimed,
        "oracle_hamiltonian": res.oracle_hamiltonian,
        "agree": res.agree,
        "short_circuit": res.short_circuit,
        "L1": v.L1 if v else None, "S1": v.S1 if v else None,
        "L2": v.L2 if v else None, "S2": v.S2 if v else None,
        "choices_tried": v.choices_tried if v else 0,
        "one_equality_choices": v.one_equality_choices if v else 0,
        "phase_op_counters": dict(sorted(res.recorder.counters.items())),
        "pipeline_error": None,
        "bound_violations": res.bound_violations,
    }
    if res.error is not None:
        rec["pipeline_error"] = {"kind": res.error.kind, "message": str(res.error)}
    elif res.oracle_error is not None:
        rec["pipeline_error"] = {"kind": "BudgetExhausted", "message": res.oracle_error}
    if timing is not None:
        rec["wall_time"] = round(timing, 6)
    return rec


def verdict_json(res: PipelineResult) -> dict:
    out = {"seed": res.seed, "short_circuit": res.short_circuit,
           "hamiltonian_claimed": res.claimed,
           "oracle_hamiltonian": res.oracle_hamiltonian, "agree": res.agree}
    if res.verdict is not None:
        out["verdict"] = res.verdict.to_json()
    if res.error is not None:
        out["pipeline_error"] = {"kind": res.error.kind, "message": str(res.error)}
    if res.oracle_hamiltonian:
        out["oracle_certificate"] = list(res.certificate) if res.certificate else None
    elif res.oracle_hamiltonian is False:
        out["oracle_certificate"] = None
        out["oracle_note"] = "exhaustive backtracking found no Hamiltonian cycle"
    return out


def weights_text(res: PipelineResult) -> str:
    if res.verdict is None or not res.verdict.weightings:
        return "# no weightings\n"
    parts = []
    tried = res.verdict.weightings
    for choice, w1, w2 in tried[:MAX_PERSISTED_CHOICES]:
        L1, S1, _ = parameters(res.pair.first, w1)
        L2, S2, _ = parameters(res.pair.second, w2)
        parts.append(f"choice {choice.describe()}\n# L1={L1} S1={S1} L2={L2} S2={S2}\n"
                     f"object 1\n{serialize_weighting(w1)}object 2\n{serialize_weighting(w2)}")
    if len(tried) > MAX_PERSISTED_CHOICES:
        parts.append(f"# {len(tried) - MAX_PERSISTED_CHOICES} further choices omitted\n")
    return "".join(parts)


def counterexample_files(res: PipelineResult) -> dict[str, str]:
    return {
        "graph.txt": serialize_edge_list(res.graph),
        "objects.txt": serialize_pair(res.pair) if res.pair else "# no object pair\n",
        "weights.txt": weights_text(res),
        "verdict.json": json.dumps(verdict_json(res), indent=2, sort_keys=True) + "\n",
        "trace.log": res.trace,
    }


def persist_counterexample(res: PipelineResult, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in counterexample_files(res).items():
        (directory / name).write_text(text)
    return directory


def replay(directory: Path) -> tuple[bool, list[str]]:
    """Re-run a stored counterexample; return (identical, names of differing files)."""
    directory = Path(directory)
    g = parse_edge_list((directory / "graph.txt").read_text())
    seed = json.loads((directory / "verdict.json").read_text())["seed"]
    res = run_pipeline(g, seed, keep_weightings=True)
    fresh = counterexample_files(res)
    differ = [name for name, text in fresh.items() if (directory / name).read_text() != text]
    return not differ, differ


# --- sweeps ----------------------------------------------------------------

def _run_one(args):
    graph_id, g, seed, timing = args
    start = time.perf_counter()
    res = run_pipeline(g, seed)
    return graph_id, res, (time.perf_counter() - start) if timing else None


def sweep(specs, seed: int = 0, out_dir: Path | None = None, jobs: int = 1,
          timing: bool = False) -> dict:
    """Run the pipeline over every generated instance and build the report."""
    tasks = [(gid, g, seed, timing) for spec in specs for gid, g in generate(spec)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=8))
    else:
        results = [_run_one(t) for t in tasks]
    records = []
    for graph_id, res, elapsed in sorted(results, key=lambda r: r[0]):
        rec = record(graph_id, res, elapsed)
        if res.agree is False and out_dir is not None:
            res = run_pipeline(res.graph, res.seed, keep_weightings=True)
            path = persist_counterexample(res, Path(out_dir) / "counterexamples" / graph_id)
            rec["counterexample"] = str(path.relative_to(out_dir))
        records.append(rec)
    report = {"records": records, "aggregate": aggregate(records),
              "specs": [spec.__dict__ for spec in specs], "seed": seed}
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / "report.json").write_text(dump_report(report))
    return report


def aggregate(records) -> dict:
    failures = sum(1 for r in records if r["pipeline_error"] is not None or r["agree"] is None)
    agreements = sum(1 for r in records if r["pipeline_error"] is None and r["agree"] is True)
    disagreements = sum(1 for r in records if r["pipeline_error"] is None and r["agree"] is False)
    decided = agreements + disagreements
    by_kind: dict[str, int] = {}
    for r in records:
        if r["pipeline_error"] is not None:
            kind = r["pipeline_error"]["kind"]
            by_kind[kind] = by_kind.get(kind, 0) + 1
    return {
        "instances": len(records),
        "agreements": agreements,
        "disagreements": disagreements,
        "pipeline_failures": failures,
        "failures_by_kind": dict(sorted(by_kind.items())),
        "agreement_rate": round(agreements / decided, 6) if decided else None,
        "claimed_hamiltonian": sum(1 for r in records if r["verdict_claimed"] is True),
        "oracle_hamiltonian": sum(1 for r in records if r["oracle_hamiltonian"] is True),
        "short_circuits": sum(1 for r in records if r["short_circuit"]),
        "bound_violations": sum(len(r["bound_violations"]) for r in records),
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def parse_n_range(text: str) -> list[int]:
    """'4..12' (step 1, or 2 for cubic callers to filter), '4,6,8' or '14'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def build_specs(ns, exhaustive: bool, random_count: int, cubic: bool, seed: int) -> list[GenSpec]:
    if cubic:
        ns = [n for n in ns if n % 2 == 0]
    if exhaustive:
        return [GenSpec(n, "exhaustive", cubic=cubic) for n in ns]
    share, extra = divmod(random_count, len(ns))
    return [GenSpec(n, "random", share + (i < extra), seed, cubic) for i, n in enumerate(ns)]
