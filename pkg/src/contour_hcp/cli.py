"""Command-line entry point: ``contour-hcp <command> [flags]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dot import object_to_dot
from .errors import GraphError, InfeasibleSpec, UnknownFixture
from .graph import FIXTURE_NAMES, fixture, parse_edge_list, serialize_edge_list
from .harness import (
    build_specs,
    dump_report,
    parse_n_range,
    replay,
    run_pipeline,
    serialize_pair,
    sweep,
    verdict_json,
)
from .objects import health
from .oracle import DEFAULT_BUDGET, find_hamiltonian

EXIT_OK, EXIT_PIPELINE, EXIT_INPUT = 0, 3, 2


def _load(args):
    if args.fixture:
        return fixture(args.fixture), f"fixture:{args.fixture}"
    if args.graph:
        return parse_edge_list(Path(args.graph).read_text()), args.graph
    raise GraphError("one of --graph or --fixture is required")


def _source(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="edge-list file")
    src.add_argument("--fixture", help="built-in graph: " + ", ".join(FIXTURE_NAMES))
    p.add_argument("--seed", type=int, default=0, help="initial-contour seed (0 = plain DFS)")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_construct(args) -> int:
    g, _ = _load(args)
    res = run_pipeline(g, args.seed, oracle=False, snapshots=args.dot)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        (out / "trace.log").write_text(res.trace)
        if res.pair:
            (out / "objects.txt").write_text(serialize_pair(res.pair))
        if args.dot:
            for i, (text, obj) in enumerate(res.recorder.snapshots):
                (out / f"step_{i:03d}.dot").write_text(object_to_dot(obj, f"step_{i:03d}", text))
    if res.short_circuit:
        print("short-circuit: the first contour is a Hamiltonian cycle")
    if res.pair:
        sys.stdout.write(serialize_pair(res.pair))
        for k, obj in ((1, res.pair.first), (2, res.pair.second)):
            h = health(obj)
            print(f"# object {k}: windows={h.window_count} segments={h.segment_count} "
                  f"links={len(h.links)} degenerate_d3={len(h.degenerate_d3)} "
                  f"free_edges={len(h.free_edges)}")
    sys.stdout.write(res.trace)
    if res.error is not None:
        print(f"error: {res.error.kind}: {res.error}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


def cmd_decide(args) -> int:
    g, name = _load(args)
    res = run_pipeline(g, args.seed, oracle=args.oracle)
    doc = verdict_json(res)
    doc.update(graph=name, n=g.n, m=len(g.edges),
               phase_op_counters=dict(sorted(res.recorder.counters.items())))
    if not args.oracle:
        for key in ("oracle_hamiltonian", "agree"):
            doc.pop(key, None)
    _emit(doc)
    return EXIT_PIPELINE if res.error is not None else EXIT_OK


def cmd_oracle(args) -> int:
    g, name = _load(args)
    cert = find_hamiltonian(g, args.budget)
    _emit({"graph": name, "hamiltonian": cert is not None,
           "certificate": list(cert.order) if cert else None})
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = parse_n_range(args.n)
    if not args.exhaustive and not args.random:
        raise InfeasibleSpec("choose --exhaustive or --random K")
    specs = build_specs(ns, args.exhaustive, args.random or 0, args.cubic, args.seed)
    report = sweep(specs, args.seed, Path(args.out) if args.out else None,
                   jobs=args.jobs, timing=args.timing)
    if args.out:
        _emit(report["aggregate"])
    else:
        sys.stdout.write(dump_report(report))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.show:
        sys.stdout.write(serialize_edge_list(fixture(args.show)))
    else:
        for name in FIXTURE_NAMES:
            print(name)
    return EXIT_OK


def cmd_replay(args) -> int:
    same, differ = replay(Path(args.dir))
    _emit({"reproduced": same, "differing_files": differ})
    return EXIT_OK if same else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contour-hcp",
                                description="Contour-pair Hamiltonicity test with an exact oracle.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build the object pair and print it with its trace")
    _source(c)
    c.add_argument("--out", help="directory for objects.txt, trace.log and DOT files")
    c.add_argument("--dot", action="store_true", help="write one DOT file per step (needs --out)")
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("decide", help="run the full pipeline and print the verdict as JSON")
    _source(d)
    d.add_argument("--oracle", action="store_true", help="cross-check with exact search")
    d.set_defaults(func=cmd_decide)

    o = sub.add_parser("oracle", help="exact Hamiltonian-cycle search")
    _source(o)
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("sweep", help="run the pipeline over generated graphs")
    s.add_argument("--n", required=True, help="node counts: '4..12', '14,16' or '10'")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="all isomorphism classes")
    mode.add_argument("--random", type=int, metavar="K", help="K seeded random graphs in total")
    s.add_argument("--cubic", action="store_true", help="3-regular graphs only")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="directory for report.json and counterexamples/")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="add wall_time to records")
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fixtures", help="list built-in graphs or print one")
    f.add_argument("--show", metavar="NAME")
    f.set_defaults(func=cmd_fixtures)

    r = sub.add_parser("replay", help="re-run a stored counterexample and compare")
    r.add_argument("dir")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "dot", False) and not args.out:
        print("error: --dot needs --out", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (GraphError, UnknownFixture, InfeasibleSpec, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
