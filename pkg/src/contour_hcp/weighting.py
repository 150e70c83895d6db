"""Node weightings of basic objects.

Node weights are +0.5 or -0.5. They are stored doubled, as the integers +1
and -1, so every sum stays exact. An edge (or window) weighs the sum of its
endpoint weights, which is always one of -1, 0, +1 and is returned as such.

Pair weighting works on "layer vertices" ``(k, v)``: node ``v`` as seen by
object ``k`` (1 or 2). A parity union-find collects two kinds of constraint:

* hard ties: a node incident to a common contour edge weighs the same in
  both objects;
* soft oppositions: an interior edge should weigh 0, so its endpoints take
  opposite signs. These are added window-incident edges first, then linking
  edges, then the rest; one that contradicts earlier constraints is dropped
  and the edge simply ends up weighing +1 or -1.

Each resulting component has two consistent sign patterns; the free choice
among them is a ``PolarityChoice``. Leftover interior imbalance is removed
afterwards by ``correct``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import NoEligibleNode, TargetNotOnContour, TooManyFreeGroups
from .objects import BasicObject

MAX_FREE_GROUPS = 20


@dataclass(frozen=True)
class NodeWeighting:
    half_weights: dict  # node -> +1 | -1 (doubled units)

    @property
    def assigned(self) -> dict:
        return {v: v in self.half_weights for v in self.half_weights}

    def node(self, v: int) -> int:
        return self.half_weights[v]

    def pair(self, u: int, v: int) -> int:
        """Weight of edge or window u-v in natural units: -1, 0 or +1."""
        return (self.half_weights[u] + self.half_weights[v]) // 2

    def flipped(self, v: int) -> "NodeWeighting":
        hw = dict(self.half_weights)
        hw[v] = -hw[v]
        return NodeWeighting(hw)


def interior_sum(obj: BasicObject, w: NodeWeighting) -> int:
    return sum(w.pair(u, v) for u, v in obj.interior_edges)


def serialize_weighting(w: NodeWeighting) -> str:
    return "".join(f"node {v} {w.half_weights[v]:+d}\n" for v in sorted(w.half_weights))


def parse_weighting(text: str) -> NodeWeighting:
    hw = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) != 3 or parts[0] != "node" or parts[2] not in ("+1", "-1"):
            raise ValueError(f"bad weighting line {line!r}")
        hw[int(parts[1])] = int(parts[2])
    return NodeWeighting(hw)


def select_single(obj: BasicObject, target) -> NodeWeighting:
    """Alternating weighting that singles out one contour pair ``(m, n)``."""
    m, n = target
    nbrs = obj.contour_nbrs
    if m not in nbrs or n not in nbrs[m]:
        raise TargetNotOnContour(f"{m}-{n} is not a contour edge or window")
    size = len(obj.contour)
    hw = {}
    odd = size % 2 == 1
    hw[m] = -1 if odd else 1
    hw[n] = -1
    prev, cur, sign = m, next(x for x in nbrs[m] if x != n), 1 if odd else -1
    if size == 2:
        return NodeWeighting(hw)
    while cur != n:
        hw[cur] = sign
        sign = -sign
        prev, cur = cur, next(x for x in nbrs[cur] if x != prev)
    return NodeWeighting(hw)


@dataclass(frozen=True)
class Island:
    nodes: tuple
    endpoints: tuple


@dataclass(frozen=True)
class CommonSubgraph:
    common_edges: frozenset
    linking_edges: frozenset
    window_incident: tuple  # (first, second) interior edges at window nodes
    islands: tuple = ()

    @property
    def common_nodes(self) -> frozenset:
        return frozenset(v for e in self.common_edges for v in e)


def extract_common_subgraph(pair) -> CommonSubgraph:
    a, b = pair.first, pair.second
    common = a.contour_edges & b.contour_edges
    touched = {v for e in common for v in e}
    win = tuple(
        frozenset(e for e in o.interior_edges if e[0] in o.window_nodes or e[1] in o.window_nodes)
        for o in (a, b)
    )
    linking = frozenset(
        e for e in a.graph.edges
        if e not in common and e[0] in touched and e[1] in touched
        and e not in win[0] and e not in win[1]
    )
    return CommonSubgraph(frozenset(common), linking, win, _islands(common | linking))


def _islands(edges) -> tuple:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen, out = set(), []
    for start in sorted(adj):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        ends = tuple(sorted(x for x in comp if len(adj[x]) == 1))
        out.append(Island(tuple(sorted(comp)), ends))
    return tuple(out)


class _ParityUF:
    """Union-find keeping each element's parity relative to its root."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 0 for x in items}
        self.unions = 0

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        # compress; parities accumulate from the far end
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = x
        return x

    def relate(self, x, y, differ: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        want = self.parity[x] ^ self.parity[y] ^ differ
        if rx == ry:
            return want == 0
        self.parent[ry] = rx
        self.parity[ry] = want
        self.unions += 1
        return True


@dataclass(frozen=True)
class FreeGroup:
    anchor: tuple  # layer vertex (object, node) whose sign the choice fixes
    members: tuple  # ((object, node), parity relative to anchor)


@dataclass(frozen=True)
class PolarityChoice:
    groups: tuple
    signs: tuple

    def describe(self) -> str:
        return " ".join(f"{k}:{v}={s:+d}" for (k, v), s in
                        zip((g.anchor for g in self.groups), self.signs)) or "-"


@dataclass
class PairConstraints:
    groups: tuple
    violated: tuple  # interior edges whose zero-weight constraint was dropped
    propagations: int
    subgraph: CommonSubgraph = field(repr=False, default=None)


def pair_constraints(pair) -> PairConstraints:
    sub = extract_common_subgraph(pair)
    objs = (pair.first, pair.second)
    nodes = list(pair.first.graph.nodes)
    verts = [(k, v) for k in (1, 2) for v in nodes]
    uf = _ParityUF(verts)
    for v in sorted(sub.common_nodes):
        uf.relate((1, v), (2, v), 0)
    violated = []
    for tier in range(3):
        for k, obj in enumerate(objs, 1):
            for e in sorted(obj.interior_edges):
                t = 0 if e in sub.window_incident[k - 1] else 1 if e in sub.linking_edges else 2
                if t != tier:
                    continue
                if not uf.relate((k, e[0]), (k, e[1]), 1):
                    violated.append((k, e))
    comps: dict = {}
    for x in verts:
        comps.setdefault(uf.find(x), []).append(x)
    groups = []
    for members in comps.values():
        members.sort()
        wins = [x for x in members if x[1] in objs[x[0] - 1].window_nodes]
        anchor = wins[0] if wins else members[0]
        pa = uf.parity[anchor] if uf.parent[anchor] != anchor else 0
        rel = tuple((x, (uf.parity[x] if uf.parent[x] != x else 0) ^ pa) for x in members)
        groups.append(FreeGroup(anchor, rel))
    groups.sort(key=lambda g: g.members[0][0])
    return PairConstraints(tuple(groups), tuple(violated), uf.unions, sub)


def enumerate_choices(pair, cap: int = MAX_FREE_GROUPS, constraints=None) -> list[PolarityChoice]:
    cons = constraints or pair_constraints(pair)
    k = len(cons.groups)
    if k > cap:
        raise TooManyFreeGroups(k)
    return [PolarityChoice(cons.groups, signs) for signs in product((1, -1), repeat=k)]


def assign_weights(pair, choice: PolarityChoice) -> tuple[NodeWeighting, NodeWeighting]:
    hw = ({}, {})
    for group, sign in zip(choice.groups, choice.signs):
        for (k, v), par in group.members:
            hw[k - 1][v] = -sign if par else sign
    return NodeWeighting(hw[0]), NodeWeighting(hw[1])


def eligible_nodes(obj: BasicObject, common_nodes) -> list[int]:
    g = obj.graph
    return [v for v in g.nodes
            if v not in obj.window_nodes and v not in common_nodes and g.degree(v) != 2]


def correct(obj: BasicObject, w: NodeWeighting, common_nodes=frozenset()) -> NodeWeighting:
    """Flip eligible nodes until the interior edges of ``obj`` sum to zero.

    A node whose sign matches the sign of the current sum and has interior
    degree one lowers the sum's magnitude by one when flipped. Eligible nodes
    are tried in id order.
    """
    gamma = interior_sum(obj, w)
    if gamma == 0:
        return w
    sign = 1 if gamma > 0 else -1
    for v in eligible_nodes(obj, common_nodes):
        if gamma == 0:
            break
        if w.node(v) == sign and len(obj.interior_adj[v]) == 1:
            w = w.flipped(v)
            gamma -= sign
    if gamma != 0:
        raise NoEligibleNode(f"interior sum still {gamma} after all eligible flips")
    return w
