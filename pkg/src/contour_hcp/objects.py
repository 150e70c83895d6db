"""Basic objects: a spanning cyclic contour with windows, plus interior edges.

A contour is a cyclic order of all nodes. Each cyclically adjacent pair is
either a contour edge (a graph edge) or a window (a fictitious edge). Every
graph edge that is not a contour edge is interior.

Transformations are expressed as pair surgery on the contour: a case names
the contour edges it cuts, the interior edges it joins onto the contour, the
windows it removes and the windows it adds. The resulting set of adjacent
pairs must form a single spanning cycle, which fixes the new contour up to
rotation and direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    PatternMismatch,
    PreconditionViolated,
    RestrictionViolated,
    WouldCreateDegenerateD3,
)
from .graph import Graph, edge

STEP1_CASES = ("1.1", "1.2", "1.3", "1.4", "1.5", "1.6")
STEP2_CASES = ("2.1", "2.2")
CASE_ORDER = {c: i for i, c in enumerate(STEP1_CASES + STEP2_CASES)}


def canonical_rotation(order) -> tuple[int, ...]:
    order = list(order)
    i = order.index(min(order))
    order = order[i:] + order[:i]
    if len(order) > 2 and order[-1] < order[1]:
        order = [order[0]] + order[:0:-1]
    return tuple(order)


@dataclass(frozen=True)
class Segment:
    nodes: tuple[int, ...]

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.nodes[0], self.nodes[-1])

    @property
    def degenerate(self) -> bool:
        return len(self.nodes) == 1


@dataclass(frozen=True)
class ObjectHealth:
    has_links: bool
    links: tuple
    degenerate_d3: tuple
    window_count: int
    free_edges: tuple
    segment_count: int


@dataclass(frozen=True)
class BasicObject:
    graph: Graph
    contour: tuple
    windows: frozenset
    # working edge set; differs from graph.edges only while edges are
    # temporarily removed during second-object construction
    work_edges: frozenset = field(default=None)

    def __post_init__(self):
        if self.work_edges is None:
            object.__setattr__(self, "work_edges", self.graph.edges)

    @classmethod
    def build(cls, graph, contour, windows, work_edges=None) -> "BasicObject":
        return cls(graph, canonical_rotation(contour), frozenset(windows), work_edges)

    @cached_property
    def pairs(self) -> list[tuple[int, int]]:
        c = self.contour
        return [edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.contour)}

    @cached_property
    def contour_nbrs(self) -> dict[int, tuple[int, int]]:
        c, n = self.contour, len(self.contour)
        return {c[i]: (c[i - 1], c[(i + 1) % n]) for i in range(n)}

    @cached_property
    def contour_edges(self) -> frozenset:
        return frozenset(p for p in self.pairs if p not in self.windows)

    @cached_property
    def interior_edges(self) -> frozenset:
        return self.work_edges - self.contour_edges

    @cached_property
    def window_nodes(self) -> frozenset:
        return frozenset(v for w in self.windows for v in w)

    @cached_property
    def interior_adj(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.contour}
        for u, v in self.interior_edges:
            out[u].append(v)
            out[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in out.items()}

    @cached_property
    def links(self) -> tuple:
        wn = self.window_nodes
        return tuple(sorted(e for e in self.interior_edges if e[0] in wn and e[1] in wn))

    @cached_property
    def segments(self) -> list[Segment]:
        if not self.windows:
            return []
        c, n = self.contour, len(self.contour)
        start = next(i for i in range(n) if edge(c[i - 1], c[i]) in self.windows)
        segs, cur = [], []
        for k in range(n):
            v = c[(start + k) % n]
            cur.append(v)
            if edge(v, c[(start + k + 1) % n]) in self.windows:
                segs.append(Segment(tuple(cur)))
                cur = []
        return segs

    @cached_property
    def segment_of(self) -> dict[int, int]:
        return {v: i for i, s in enumerate(self.segments) for v in s.nodes}

    def window_partners(self, v: int) -> list[int]:
        return sorted(u for u in self.contour_nbrs[v] if edge(u, v) in self.windows)

    def edge_nbrs(self, v: int) -> list[int]:
        """Contour neighbours of ``v`` joined to it by a contour edge."""
        return sorted(u for u in set(self.contour_nbrs[v]) if edge(u, v) in self.contour_edges)

    def is_degenerate(self, v: int) -> bool:
        a, b = self.contour_nbrs[v]
        return edge(a, v) in self.windows and edge(b, v) in self.windows

    @cached_property
    def degenerate_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.window_nodes if self.is_degenerate(v)))

    @cached_property
    def degenerate_d3(self) -> tuple[int, ...]:
        return tuple(v for v in self.degenerate_nodes if self.graph.degree(v) == 3)

    @cached_property
    def free_edges(self) -> tuple:
        wn = self.window_nodes
        return tuple(
            sorted(e for e in self.interior_edges if e[0] not in wn and e[1] not in wn)
        )

    def validate(self, strict=True) -> None:
        """Raise ``AssertionError`` if any structural invariant fails.

        ``strict`` also requires every window to be a non-edge; preliminary
        second objects may carry a window parallel to an interior edge.
        """
        g = self.graph
        assert sorted(self.contour) == list(g.nodes), "contour is not a permutation"
        assert self.work_edges <= g.edges
        pairs = set(self.pairs)
        assert len(pairs) == len(self.pairs), "repeated contour pair"
        assert self.windows <= pairs, "window not on contour"
        for p in self.contour_edges:
            assert p in self.work_edges, f"contour pair {p} is neither edge nor window"
        if strict:
            for w in self.windows:
                assert w not in self.work_edges, f"window {w} is a graph edge"
        assert self.contour_edges | self.interior_edges == self.work_edges
        assert not (self.contour_edges & self.interior_edges)

    def with_edges(self, work_edges) -> "BasicObject":
        return BasicObject(self.graph, self.contour, self.windows, frozenset(work_edges))


def initial_object(g: Graph, order=None) -> BasicObject:
    if order is None:
        order = dfs_order(g)
    order = list(order)
    if sorted(order) != list(g.nodes):
        raise ValueError("order is not a permutation of the nodes")
    n = len(order)
    windows = {
        edge(order[i], order[(i + 1) % n])
        for i in range(n)
        if not g.has_edge(order[i], order[(i + 1) % n])
    }
    return BasicObject.build(g, order, windows)


def dfs_order(g: Graph, start=1, rng=None) -> list[int]:
    """Depth-first preorder; neighbours in ascending id order (or shuffled by ``rng``)."""
    seen, out, stack = set(), [], [start]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        out.append(v)
        nbrs = list(g.adj[v])
        if rng is not None:
            rng.shuffle(nbrs)
        else:
            nbrs.reverse()
        stack.extend(w for w in nbrs if w not in seen)
    return out


def health(obj: BasicObject) -> ObjectHealth:
    return ObjectHealth(
        has_links=bool(obj.links),
        links=obj.links,
        degenerate_d3=tuple(Segment((v,)) for v in obj.degenerate_d3),
        window_count=len(obj.windows),
        free_edges=obj.free_edges,
        segment_count=len(obj.segments),
    )


def check_window_bound(obj: BasicObject) -> bool:
    if obj.links:
        raise PreconditionViolated("object has links")
    if obj.degenerate_nodes:
        raise PreconditionViolated("object has degenerate segments")
    return len(obj.segments) <= obj.graph.n // 6


# --- serialization --------------------------------------------------------


def contour_tokens(obj: BasicObject) -> list[str]:
    toks = []
    c = obj.contour
    for i, v in enumerate(c):
        toks.append(str(v))
        if edge(v, c[(i + 1) % len(c)]) in obj.windows:
            toks.append("W")
    return toks


def serialize_object(obj: BasicObject) -> str:
    interior = " ".join(f"{u}-{v}" for u, v in sorted(obj.interior_edges))
    return f"contour: {' '.join(contour_tokens(obj))}\ninterior: {interior}\n"


def parse_object(text: str, g: Graph) -> BasicObject:
    contour, windows, interior = [], set(), None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("contour:"):
            for tok in line[len("contour:"):].split():
                if tok == "W":
                    windows.add(len(contour) - 1)
                else:
                    contour.append(int(tok))
        elif line.startswith("interior:"):
            interior = {
                edge(*map(int, tok.split("-"))) for tok in line[len("interior:"):].split()
            }
    n = len(contour)
    wpairs = {edge(contour[i], contour[(i + 1) % n]) for i in windows}
    contour_edges = {
        edge(contour[i], contour[(i + 1) % n]) for i in range(n) if i not in windows
    }
    if interior is None:
        # no interior line: every other graph edge is interior
        return BasicObject.build(g, contour, wpairs)
    work = frozenset(contour_edges | interior)
    return BasicObject.build(g, contour, wpairs, work if work != g.edges else None)


# --- transformations ------------------------------------------------------


@dataclass(frozen=True)
class Move:
    cuts: frozenset
    joins: frozenset
    removed: frozenset
    added: frozenset


@dataclass
class Restrictions:
    locked: set = field(default_factory=set)
    forbidden: set = field(default_factory=set)


def rearrange(obj: BasicObject, move: Move) -> BasicObject:
    """Apply pair surgery; raise ``PatternMismatch`` unless the result is one spanning cycle."""
    if not move.removed <= obj.windows:
        raise PatternMismatch(f"not windows: {sorted(move.removed - obj.windows)}")
    if not move.cuts <= obj.contour_edges:
        raise PatternMismatch(f"not contour edges: {sorted(move.cuts - obj.contour_edges)}")
    if not move.joins <= obj.interior_edges:
        raise PatternMismatch(f"not interior edges: {sorted(move.joins - obj.interior_edges)}")
    kept = set(obj.pairs) - move.removed - move.cuts
    new_pairs = list(kept) + sorted(move.joins) + sorted(move.added)
    if len(set(new_pairs)) != len(new_pairs):
        raise PatternMismatch("repeated contour pair")
    nbrs: dict[int, list[int]] = {v: [] for v in obj.contour}
    for u, v in new_pairs:
        if u == v:
            raise PatternMismatch("degenerate pair")
        nbrs[u].append(v)
        nbrs[v].append(u)
    if any(len(ns) != 2 for ns in nbrs.values()):
        raise PatternMismatch("pairs do not form a cycle")
    start = min(nbrs)
    order, prev, cur = [start], None, start
    while True:
        a, b = nbrs[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > len(nbrs):
            raise PatternMismatch("pairs do not form a cycle")
    if len(order) != len(nbrs):
        raise PatternMismatch("pairs form more than one cycle")
    windows = (obj.windows - move.removed) | {p for p in move.added if p not in obj.work_edges}
    return BasicObject.build(obj.graph, order, windows, obj.work_edges)


def _p(u, v):
    return edge(u, v)


def case_move(case: str, b: dict) -> Move:
    """Translate a case id and role binding into pair surgery."""
    if case == "1.6":
        return case_move(b["via"], b)
    if case == "1.1":
        return Move(frozenset(), frozenset({_p(b["b"], b["c"])}),
                    frozenset({_p(b["a"], b["b"]), _p(b["c"], b["d"])}),
                    frozenset({_p(b["a"], b["d"])}))
    if case == "1.2":
        return Move(frozenset(), frozenset({_p(b["b"], b["d"])}),
                    frozenset({_p(b["a"], b["b"]), _p(b["c"], b["d"]), _p(b["e"], b["f"])}),
                    frozenset({_p(b["a"], b["e"]), _p(b["c"], b["f"])}))
    if case == "1.3":
        cd = _p(b["c"], b["d"])
        if cd == _p(b["e"], b["f"]):
            # c-d is the segment's own far window: only a and m stay open
            added = {_p(b["a"], b["m"])}
        elif cd == _p(b["a"], b["b"]):
            added = {_p(b["e"], b["m"])}
        else:
            added = {_p(b["a"], b["e"]), _p(b["m"], b["d"])}
        return Move(frozenset({_p(b["l"], b["m"])}),
                    frozenset({_p(b["b"], b["f"]), _p(b["l"], b["c"])}),
                    frozenset({_p(b["a"], b["b"]), cd, _p(b["e"], b["f"])}),
                    frozenset(added))
    if case == "1.4":
        return Move(frozenset({_p(b["l"], b["m"]), _p(b["s"], b["t"])}),
                    frozenset({_p(b["b"], b["f"]), _p(b["l"], b["s"])}),
                    frozenset({_p(b["a"], b["b"]), _p(b["e"], b["f"])}),
                    frozenset({_p(b["a"], b["t"]), _p(b["e"], b["m"])}))
    if case == "1.5":
        joins = frozenset({_p(b["a"], b["l"]), _p(b["a"], b["m"])})
        removed = frozenset({_p(b["a"], b["b"]), _p(b["a"], b["c"])})
        if b["s"] == b["m"]:
            # l and m adjacent on the contour: slot a between them
            return Move(frozenset({_p(b["l"], b["m"])}), joins, removed,
                        frozenset({_p(b["b"], b["c"])}))
        return Move(frozenset({_p(b["l"], b["s"]), _p(b["m"], b["t"])}), joins, removed,
                    frozenset({_p(b["b"], b["s"]), _p(b["c"], b["t"])}))
    if case == "2.1":
        return Move(frozenset({_p(b["k"], b["s"]), _p(b["t"], b["m"])}),
                    frozenset({_p(b["s"], b["t"])}), frozenset(),
                    frozenset({_p(b["k"], b["m"])}))
    if case == "2.2":
        return Move(frozenset({_p(b["k"], b["s"]), _p(b["t"], b["m"])}),
                    frozenset({_p(b["s"], b["t"])}), frozenset({_p(b["a"], b["b"])}),
                    frozenset({_p(b["a"], b["k"]), _p(b["b"], b["m"])}))
    raise PatternMismatch(f"unknown case {case}")


def _check_pattern(obj: BasicObject, case: str, b: dict) -> None:
    wn = obj.window_nodes
    links = set(obj.links)
    if case in ("1.1", "1.2", "1.6"):
        inner = b.get("via", case)
        u, v = ("b", "c") if inner == "1.1" else ("b", "d")
        if _p(b[u], b[v]) not in links:
            raise PatternMismatch(f"{b[u]}-{b[v]} is not a link")
        if case == "1.6" and not any(obj.graph.degree(b[r]) == 3 and obj.is_degenerate(b[r])
                                     for r in (u, v)):
            raise PatternMismatch("link does not touch a degenerate degree-3 segment")
    elif case in ("1.3", "1.4"):
        if _p(b["b"], b["f"]) not in links:
            raise PatternMismatch("b-f is not a link")
        seg = obj.segment_of
        if seg[b["b"]] != seg[b["f"]] or seg[b["l"]] != seg[b["b"]]:
            raise PatternMismatch("b, f, l must share one segment")
        other = b["c"] if case == "1.3" else b["s"]
        if seg[other] == seg[b["b"]]:
            raise PatternMismatch("partner node must lie in another segment")
        if case == "1.3" and b["c"] not in wn:
            raise PatternMismatch("c must be a window node")
    elif case == "1.5":
        a = b["a"]
        if not (obj.is_degenerate(a) and obj.graph.degree(a) == 3):
            raise PatternMismatch("a is not a degenerate degree-3 segment")
        if any(x in wn for x in obj.interior_adj[a]):
            raise PatternMismatch("a has a window neighbour (case 1.6 applies)")
    elif case in STEP2_CASES:
        if _p(b["s"], b["t"]) not in obj.free_edges:
            raise PatternMismatch("s-t is not a free edge")
        # k and m carry free edges (or none), so neither is a window node
        if b["k"] in wn or b["m"] in wn:
            raise PatternMismatch("k and m must not be window nodes")
    else:
        raise PatternMismatch(f"unknown case {case}")


def apply_case(obj: BasicObject, case: str, binding: dict,
               restrict: Restrictions | None = None) -> BasicObject:
    _check_pattern(obj, case, binding)
    move = case_move(case, binding)
    if restrict is not None and move.cuts & restrict.locked:
        raise RestrictionViolated(f"would move locked edges {sorted(move.cuts & restrict.locked)}")
    new = rearrange(obj, move)
    if not set(new.degenerate_d3) <= set(obj.degenerate_d3):
        raise WouldCreateDegenerateD3(
            f"creates degenerate segment at {sorted(set(new.degenerate_d3) - set(obj.degenerate_d3))}")
    if restrict is not None:
        fresh = (new.window_nodes & restrict.forbidden) - obj.window_nodes
        if fresh:
            raise RestrictionViolated(f"forbidden nodes become window nodes: {sorted(fresh)}")
    return new


def _link_bindings(obj: BasicObject, u: int, v: int) -> list[tuple[str, dict]]:
    """Case 1.1 and 1.2 bindings joining the link u-v."""
    out = []
    wins = sorted(obj.windows)
    for b, c in ((u, v), (v, u)):
        for a in obj.window_partners(b):
            for d in obj.window_partners(c):
                if _p(a, b) != _p(c, d):
                    out.append(("1.1", {"a": a, "b": b, "c": c, "d": d}))
    for b, d in ((u, v), (v, u)):
        for a in obj.window_partners(b):
            for c in obj.window_partners(d):
                if _p(a, b) == _p(c, d):
                    continue
                for w in wins:
                    if w in (_p(a, b), _p(c, d)):
                        continue
                    for e, f in (w, w[::-1]):
                        out.append(("1.2", {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f}))
    return out


def _step1_candidates(obj: BasicObject) -> list[tuple[str, dict]]:
    out: list[tuple[str, dict]] = []
    seg = obj.segment_of
    degen3 = set(obj.degenerate_d3)
    for u, v in obj.links:
        if _p(u, v) in obj.windows:
            continue
        if seg[u] != seg[v]:
            for case, b in _link_bindings(obj, u, v):
                if u in degen3 or v in degen3:
                    out.append(("1.6", dict(b, via=case)))
                else:
                    out.append((case, b))
            continue
        # both ends of one segment: close it into a cycle and reopen elsewhere
        nodes = obj.segments[seg[u]].nodes
        b_, f_ = nodes[0], nodes[-1]
        (a_,) = obj.window_partners(b_)
        (e_,) = obj.window_partners(f_)
        found13 = []
        for l in nodes:
            for m in obj.edge_nbrs(l):
                if seg[m] != seg[l]:
                    continue
                for c in obj.interior_adj[l]:
                    if c in obj.window_nodes and seg[c] != seg[l]:
                        for d in obj.window_partners(c):
                            found13.append(("1.3", {"a": a_, "b": b_, "c": c, "d": d,
                                                    "e": e_, "f": f_, "l": l, "m": m}))
        out.extend(found13)
        if any(c in obj.window_nodes and seg[c] != seg[l]
               for l in nodes for c in obj.interior_adj[l]):
            continue
        for l in nodes:
            for m in obj.edge_nbrs(l):
                if seg[m] != seg[l]:
                    continue
                for s in obj.interior_adj[l]:
                    if seg[s] == seg[l]:
                        continue
                    for t in obj.edge_nbrs(s):
                        out.append(("1.4", {"a": a_, "b": b_, "e": e_, "f": f_,
                                            "l": l, "m": m, "s": s, "t": t}))
    for a in obj.degenerate_d3:
        nbrs = obj.interior_adj[a]
        if any(x in obj.window_nodes for x in nbrs):
            continue  # reached through the link bindings above as case 1.6
        p1, p2 = obj.window_partners(a)
        for bb, cc in ((p1, p2), (p2, p1)):
            for l in nbrs:
                for m in nbrs:
                    if l == m:
                        continue
                    if m in obj.edge_nbrs(l):
                        out.append(("1.5", {"a": a, "b": bb, "c": cc, "l": l, "m": m,
                                            "s": m, "t": l}))
                    for s in obj.edge_nbrs(l):
                        for t in obj.edge_nbrs(m):
                            if s == m or t == l:
                                continue
                            out.append(("1.5", {"a": a, "b": bb, "c": cc, "l": l,
                                                "m": m, "s": s, "t": t}))
    return out


def _step2_candidates(obj: BasicObject) -> list[tuple[str, dict]]:
    out: list[tuple[str, dict]] = []
    wins = sorted(obj.windows)
    for st in obj.free_edges:
        for s, t in (st, st[::-1]):
            for k in obj.edge_nbrs(s):
                if k == t:
                    continue
                for m in obj.edge_nbrs(t):
                    if m in (s, k):
                        continue
                    out.append(("2.1", {"k": k, "m": m, "s": s, "t": t}))
                    for w in wins:
                        for a, b in (w, w[::-1]):
                            out.append(("2.2", {"a": a, "b": b, "k": k, "m": m,
                                                "s": s, "t": t}))
    return out


def _sort_key(obj: BasicObject, case: str, binding: dict, move: Move):
    pos = obj.position
    n = len(obj.contour)

    def pair_pos(p):
        i, j = pos[p[0]], pos[p[1]]
        return max(i, j) if {i, j} == {0, n - 1} and n > 2 else min(i, j)

    involved = list(move.removed) + list(move.cuts)
    lead = min((pair_pos(p) for p in involved), default=n)
    return (lead, CASE_ORDER[case], sorted(binding.items(), key=lambda kv: kv[0]).__repr__())


def find_applicable(obj: BasicObject, phase: str, restrict: Restrictions | None = None,
                    cases=None) -> list[tuple[str, dict]]:
    """All case bindings that apply cleanly, in deterministic scan order.

    Step-2 bindings are kept only if they add exactly one window and create
    no link. ``cases`` optionally limits the result to some case ids.
    """
    if phase in ("Step1", "1"):
        raw = _step1_candidates(obj)
    elif phase in ("Step2", "2"):
        raw = _step2_candidates(obj)
    else:
        raise ValueError(f"unknown phase {phase}")
    seen = set()
    keyed = []
    for case, b in raw:
        if cases is not None and case not in cases:
            continue
        move = case_move(case, b)
        sig = (case, move)
        if sig in seen:
            continue
        seen.add(sig)
        try:
            new = apply_case(obj, case, b, restrict)
        except (PatternMismatch, WouldCreateDegenerateD3, RestrictionViolated):
            continue
        if case in STEP2_CASES:
            if new.links or len(new.windows) != len(obj.windows) + 1:
                continue
        keyed.append((_sort_key(obj, case, b, move), case, b))
    keyed.sort(key=lambda x: x[0])
    return [(case, b) for _, case, b in keyed]
