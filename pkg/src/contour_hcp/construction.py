"""Drivers that build the first and second basic objects."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    ChainOverlap,
    ConstructionStuck,
    DisjointnessViolated,
    LinkAfterReinstatement,
    NoInteriorMaterial,
    NonTermination,
    RestrictionUnsatisfiable,
)
from .graph import Graph, edge
from .objects import (
    BasicObject,
    Restrictions,
    apply_case,
    find_applicable,
    initial_object,
)


@dataclass
class Recorder:
    """Transformation trace, phase counters and optional object snapshots."""

    lines: list = field(default_factory=list)
    counters: Counter = field(default_factory=Counter)
    snapshots: list | None = None
    limit: int = 0
    applied: int = 0

    def note(self, text: str, obj: BasicObject | None = None) -> None:
        self.lines.append(text)
        if self.snapshots is not None and obj is not None:
            self.snapshots.append((text, obj))

    def step(self, label: str, case: str, binding: dict, obj: BasicObject) -> None:
        self.applied += 1
        self.counters[f"{label}_applications"] += 1
        roles = " ".join(f"{k}={v}" for k, v in sorted(binding.items()))
        self.note(f"{label} case={case} {roles} windows={len(obj.windows)}", obj)
        if self.limit and self.applied > self.limit:
            raise NonTermination(
                f"more than {self.limit} transformations applied", self.lines)


@dataclass
class RestrictedObject:
    object: BasicObject
    locked_contour_edges: set = field(default_factory=set)
    forbidden_window_nodes: set = field(default_factory=set)
    removed_interior: set = field(default_factory=set)

    @property
    def restrictions(self) -> Restrictions:
        return Restrictions(self.locked_contour_edges, self.forbidden_window_nodes)


@dataclass(frozen=True)
class ObjectPair:
    first: BasicObject
    second: BasicObject

    def check(self) -> None:
        if self.first.interior_edges & self.second.interior_edges:
            raise DisjointnessViolated(
                f"shared interior edges {sorted(self.first.interior_edges & self.second.interior_edges)}")
        for obj in (self.first, self.second):
            obj.validate()
            if obj.links or obj.degenerate_d3:
                raise ConstructionStuck("object has links or degenerate degree-3 segments")


def guard_limit(g: Graph) -> int:
    return 8 * g.n * g.n


def run_step1(obj, rec: Recorder, label: str, restrict=None) -> BasicObject:
    while obj.links or obj.degenerate_d3:
        cands = find_applicable(obj, "Step1", restrict)
        if not cands:
            raise ConstructionStuck(
                f"{label}: links {list(obj.links)} / degenerate {list(obj.degenerate_d3)} "
                "remain but no case applies", rec.lines)
        case, binding = cands[0]
        obj = apply_case(obj, case, binding, restrict)
        rec.step(label, case, binding, obj)
    return obj


def run_step2(obj, rec: Recorder, label: str, restrict=None) -> BasicObject:
    while True:
        cands = find_applicable(obj, "Step2", restrict)
        rec.counters[f"{label}_candidates_seen"] += len(cands)
        if not cands:
            return obj
        case, binding = cands[0]
        obj = apply_case(obj, case, binding, restrict)
        rec.step(label, case, binding, obj)


def construct_first(g: Graph, order=None, rec: Recorder | None = None) -> BasicObject:
    rec = rec or Recorder(limit=guard_limit(g))
    obj = initial_object(g, order)
    rec.note(f"first initial windows={len(obj.windows)}", obj)
    obj = run_step1(obj, rec, "first.step1")
    if not obj.windows:
        rec.counters["hamiltonian_contour_seen"] += 1
    obj = run_step2(obj, rec, "first.step2")
    return obj


def second_blocks(first: BasicObject) -> list[tuple[int, ...]]:
    """Contour blocks of the preliminary second object, in default order.

    Chains through degree-3 window nodes, interior edges at degree-2 window
    nodes, free edges, chains through degenerate degree-2 nodes, and lone
    degree-2 non-window nodes. Within a category blocks follow the first
    contour; each block starts at its end seen first along the contour.
    """
    g, pos = first.graph, first.position
    wn = first.window_nodes

    def oriented(nodes):
        nodes = list(nodes)
        if len(nodes) > 1 and pos[nodes[-1]] < pos[nodes[0]]:
            nodes.reverse()
        return tuple(nodes)

    chains3, edges2, frees, chains2, singles = [], [], [], [], []
    for v in first.contour:
        inner = first.interior_adj[v]
        if v in wn:
            if first.is_degenerate(v):
                if g.degree(v) == 2:
                    chains2.append((pos[v], oriented((inner[0], v, inner[1]))))
            elif g.degree(v) == 3:
                chains3.append((pos[v], oriented((inner[0], v, inner[1]))))
            elif inner:
                edges2.append((pos[v], (inner[0], v)))
        elif g.degree(v) == 2:
            singles.append((pos[v], (v,)))
    for u, v in first.free_edges:
        frees.append((min(pos[u], pos[v]), oriented((u, v))))
    blocks = []
    for group in (chains3, edges2, frees, chains2, singles):
        blocks += [b for _, b in sorted(group)]
    return blocks


def preliminary_second(first: BasicObject, block_order=None) -> RestrictedObject:
    """Preliminary contour of the second object.

    ``block_order`` optionally fixes the order and orientation of the blocks;
    it must list exactly the blocks the first object determines.
    """
    if not first.windows:
        raise NoInteriorMaterial("first object has no windows")
    blocks = second_blocks(first)
    if block_order is not None:
        want = {frozenset([tuple(b), tuple(b)[::-1]]) for b in blocks}
        got = [tuple(b) for b in block_order]
        if {frozenset([b, b[::-1]]) for b in got} != want or len(got) != len(blocks):
            raise ValueError("block_order does not match the first object's blocks")
        blocks = got
    flat = [v for b in blocks for v in b]
    if len(flat) != len(set(flat)) or set(flat) != set(first.graph.nodes):
        dup = sorted(v for v, c in Counter(flat).items() if c > 1)
        raise ChainOverlap(f"blocks overlap or miss nodes (repeated {dup})")
    windows = set()
    for i, b in enumerate(blocks):
        nxt = blocks[(i + 1) % len(blocks)]
        windows.add(edge(b[-1], nxt[0]))
    obj = BasicObject(first.graph, tuple(flat), frozenset(windows))
    obj = BasicObject.build(first.graph, obj.contour, obj.windows)
    return RestrictedObject(obj, set(first.interior_edges), set(), set())


def forbidden_nodes(first: BasicObject) -> set[int]:
    g = first.graph
    out = set()
    for a in first.contour:
        if g.degree(a) != 2:
            continue
        if a in first.window_nodes or not first.is_degenerate(a):
            out.update(c for c in first.edge_nbrs(a))
    return out


def apply_restrictions(r: RestrictedObject, first: BasicObject,
                       rec: Recorder | None = None) -> RestrictedObject:
    rec = rec or Recorder(limit=guard_limit(first.graph))
    g = first.graph
    removed = {e for e in first.contour_edges if e[0] in first.window_nodes
               or e[1] in first.window_nodes}
    obj = r.object.with_edges(g.edges - removed)
    rec.counters["second.removed_edges"] = len(removed)
    shadowed = {w for w in obj.windows if w in obj.work_edges}
    if shadowed:
        obj = BasicObject(g, obj.contour, obj.windows - shadowed, obj.work_edges)
        for w in sorted(shadowed):
            rec.note(f"second.restrict close-window {w[0]}-{w[1]} windows={len(obj.windows)}", obj)
    forbidden = forbidden_nodes(first)
    locked = set(r.locked_contour_edges)
    restrict = Restrictions(locked, forbidden)
    while True:
        bad = sorted(forbidden & obj.window_nodes)
        if not bad:
            break
        x = bad[0]
        fixes = [
            (case, b) for case, b in find_applicable(obj, "Step1", restrict)
            if case in ("1.1", "1.2")
            and x in ((b["b"], b["c"]) if case == "1.1" else (b["b"], b["d"]))
        ]
        fixes = [(c, b) for c, b in fixes
                 if x not in apply_case(obj, c, b, restrict).window_nodes]
        if not fixes:
            raise RestrictionUnsatisfiable(
                f"forbidden node {x} is a window node and no link at it can be removed",
                rec.lines)
        case, b = fixes[0]
        obj = apply_case(obj, case, b, restrict)
        joined = edge(b["b"], b["c"] if case == "1.1" else b["d"])
        locked.add(joined)
        rec.step("second.restrict", case, b, obj)
    return RestrictedObject(obj, locked, forbidden, removed)


def complete_second(r: RestrictedObject, first: BasicObject,
                    rec: Recorder | None = None) -> ObjectPair:
    g = first.graph
    rec = rec or Recorder(limit=guard_limit(g))
    restrict = r.restrictions
    obj = run_step1(r.object, rec, "second.step1", restrict)
    obj = run_step2(obj, rec, "second.step2", restrict)
    full = obj.with_edges(g.edges)
    shadowed = {w for w in full.windows if w in g.edges}
    if shadowed:
        full = BasicObject(g, full.contour, full.windows - shadowed, g.edges)
        rec.note(f"second.reinstate close-windows={len(shadowed)}", full)
    rec.note(f"second.reinstate edges={len(r.removed_interior)} windows={len(full.windows)}", full)
    shared = first.interior_edges & full.interior_edges
    if shared:
        raise DisjointnessViolated(f"interiors share {sorted(shared)}", rec.lines)
    if full.links or full.degenerate_d3:
        raise LinkAfterReinstatement(
            f"reinstated edges leave links {list(full.links)}", rec.lines)
    pair = ObjectPair(first, full)
    pair.check()
    return pair


def construct_pair(g: Graph, order=None, rec: Recorder | None = None) -> ObjectPair:
    rec = rec or Recorder(limit=guard_limit(g))
    first = construct_first(g, order, rec)
    prelim = preliminary_second(first)
    rec.note(f"second preliminary windows={len(prelim.object.windows)}", prelim.object)
    restricted = apply_restrictions(prelim, first, rec)
    return complete_second(restricted, first, rec)
