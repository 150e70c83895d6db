"""Problem instances: undirected simple graphs of maximum degree 3.

Nodes are the integers 1..n. Edges are stored as sorted pairs ``(u, v)`` with
``u < v``. The edge-list text format is::

    # optional comment lines
    p <n> <m>
    e <u> <v>        (m lines, 1 <= u < v <= n)
    n <id> <label>   (optional external names)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    DegreeDeficient,
    DegreeExceeded,
    Disconnected,
    DuplicateEdge,
    MalformedLine,
    PureCycle,
    SelfLoop,
    UnknownFixture,
)


def edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset
    labels: tuple | None = field(default=None, compare=False)

    @classmethod
    def from_edges(cls, n, pairs, labels=None, validate=True) -> "Graph":
        seen = set()
        for u, v in pairs:
            if u == v:
                raise SelfLoop(f"self-loop at node {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            e = edge(u, v)
            if e in seen:
                raise DuplicateEdge(f"duplicate edge {e[0]}-{e[1]}")
            seen.add(e)
        g = cls(n, frozenset(seen), tuple(labels) if labels else None)
        if validate:
            g.validate()
        return g

    @cached_property
    def adj(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {1}
        stack = [1]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def validate(self) -> None:
        for v in self.nodes:
            d = self.degree(v)
            if d > 3:
                raise DegreeExceeded(v, d)
        for v in self.nodes:
            d = self.degree(v)
            if d < 2:
                raise DegreeDeficient(v, d)
        if not self.is_connected():
            raise Disconnected("graph is not connected")

    def is_cubic(self) -> bool:
        return all(self.degree(v) == 3 for v in self.nodes)


_HEADER = re.compile(r"^p\s+(\d+)\s+(\d+)$")
_EDGE = re.compile(r"^e\s+(\d+)\s+(\d+)$")
_LABEL = re.compile(r"^n\s+(\d+)\s+(\S+)$")


def parse_edge_list(text: str) -> Graph:
    n = m = None
    pairs = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            match = _HEADER.match(line)
            if not match:
                raise MalformedLine(lineno, raw, "expected header 'p <N> <M>'")
            n, m = int(match.group(1)), int(match.group(2))
            if n < 1:
                raise MalformedLine(lineno, raw, "node count must be positive")
            continue
        match = _EDGE.match(line)
        if match:
            u, v = int(match.group(1)), int(match.group(2))
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedLine(lineno, raw, f"node id outside 1..{n}")
            pairs.append((u, v))
            continue
        match = _LABEL.match(line)
        if match and 1 <= int(match.group(1)) <= n:
            labels[int(match.group(1))] = match.group(2)
            continue
        raise MalformedLine(lineno, raw)
    if n is None:
        raise MalformedLine(0, "", "missing header")
    if len(pairs) != m:
        raise MalformedLine(0, "", f"header declares {m} edges, found {len(pairs)}")
    label_tuple = None
    if labels:
        label_tuple = tuple(labels.get(v, str(v)) for v in range(1, n + 1))
    return Graph.from_edges(n, pairs, label_tuple)


def serialize_edge_list(g: Graph) -> str:
    lines = [f"p {g.n} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in g.sorted_edges()]
    if g.labels:
        lines += [f"n {v} {lab}" for v, lab in zip(g.nodes, g.labels)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ContractionMap:
    original_to_reduced: dict
    reduced_chains: dict  # reduced degree-2 node -> ordered original chain
    original: Graph | None = field(default=None, compare=False, repr=False)

    def members(self, r: int) -> list[int]:
        if r in self.reduced_chains:
            return list(self.reduced_chains[r])
        return [v for v, rr in self.original_to_reduced.items() if rr == r]

    def lift_cycle(self, cycle) -> list[int]:
        """Expand a cycle of the reduced graph into one of the original graph."""
        adjacent = self.original.has_edge
        out: list[int] = []
        for i, r in enumerate(cycle):
            part = self.members(r)
            if out:
                if not adjacent(out[-1], part[0]):
                    part.reverse()
            else:
                nxt = self.members(cycle[(i + 1) % len(cycle)])
                if not any(adjacent(part[-1], w) for w in nxt):
                    part.reverse()
            out.extend(part)
        return out


def contract_degree2_chains(g: Graph) -> tuple[Graph, ContractionMap]:
    """Merge every run of adjacent degree-2 nodes into a single degree-2 node.

    A run whose two outside neighbours coincide (a cycle hanging off one cut
    vertex) is merged down to two nodes, since one node would need a parallel
    edge.
    """
    if all(g.degree(v) == 2 for v in g.nodes):
        raise PureCycle("every node has degree 2")
    deg2 = {v for v in g.nodes if g.degree(v) == 2}
    group_of: dict[int, tuple[int, ...]] = {}
    for v in sorted(deg2):
        if v in group_of:
            continue
        # walk to one end of the run, then collect it in order
        start, prev = v, None
        while True:
            nxt = [w for w in g.adj[start] if w in deg2 and w != prev]
            if not nxt or nxt[0] == v:
                break
            prev, start = start, nxt[0]
        run, prev, cur = [start], None, start
        while True:
            nxt = [w for w in g.adj[cur] if w in deg2 and w != prev and w not in run]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            run.append(cur)
        ends = [w for w in g.adj[run[0]] if w not in deg2] + [
            w for w in g.adj[run[-1]] if w not in deg2
        ]
        if len(run) >= 2 and len(set(ends)) == 1:
            half = len(run) // 2
            parts = [tuple(run[:half]), tuple(run[half:])]
        else:
            parts = [tuple(run)]
        for part in parts:
            for w in part:
                group_of[w] = part
    groups: list[tuple[int, ...]] = []
    seen = set()
    for v in g.nodes:
        grp = group_of.get(v, (v,))
        if grp not in seen:
            seen.add(grp)
            groups.append(grp)
    if all(len(grp) == 1 for grp in groups):
        return g, ContractionMap({v: v for v in g.nodes}, {}, g)
    groups.sort(key=min)
    to_reduced = {}
    chains = {}
    for rid, grp in enumerate(groups, 1):
        for w in grp:
            to_reduced[w] = rid
        if len(grp) > 1:
            chains[rid] = grp
    new_edges = {
        edge(to_reduced[u], to_reduced[v])
        for u, v in g.edges
        if to_reduced[u] != to_reduced[v]
    }
    reduced = Graph(len(groups), frozenset(new_edges))
    return reduced, ContractionMap(to_reduced, chains, g)


# --- fixtures -------------------------------------------------------------

_G25_CONTOUR_EDGES = [
    (1, 2), (1, 3), (3, 4), (4, 5), (5, 11), (11, 12), (12, 13), (13, 19),
    (19, 20), (20, 21), (21, 22), (22, 23), (23, 24), (24, 25), (14, 15),
    (15, 16), (16, 17), (17, 18), (9, 10), (8, 9), (7, 8), (6, 7),
]
_G25_CHAIN_EDGES = [
    (16, 14), (14, 13), (4, 10), (10, 11), (1, 6), (6, 5), (7, 2), (2, 3),
    (21, 18), (18, 19),
]
_G25_OTHER_EDGES = [(20, 25), (8, 15), (22, 24), (17, 23), (9, 12)]

# Contour of the worked 25-node example; windows 25|14, 18|10, 6|2.
G25_FIRST_CONTOUR = (
    2, 1, 3, 4, 5, 11, 12, 13, 19, 20, 21, 22, 23, 24, 25,
    14, 15, 16, 17, 18,
    10, 9, 8, 7, 6,
)


def _g25() -> Graph:
    return Graph.from_edges(25, _G25_CONTOUR_EDGES + _G25_CHAIN_EDGES + _G25_OTHER_EDGES)


def _k4() -> Graph:
    return Graph.from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


def _petersen() -> Graph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(i + 5, (i + 1) % 5 + 6) for i in range(1, 6)]
    return Graph.from_edges(10, outer + spokes + inner)


def prism(k: int) -> Graph:
    if k < 3:
        raise UnknownFixture(f"prism needs k >= 3, got {k}")
    top = [(i, i % k + 1) for i in range(1, k + 1)]
    bottom = [(i + k, i % k + 1 + k) for i in range(1, k + 1)]
    rungs = [(i, i + k) for i in range(1, k + 1)]
    return Graph.from_edges(2 * k, top + bottom + rungs)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


FIXTURE_NAMES = ("g25", "k4", "petersen", "prism<k>", "cycle<n>")


def fixture(name: str) -> Graph:
    key = name.strip().lower()
    if key == "g25":
        return _g25()
    if key == "k4":
        return _k4()
    if key == "petersen":
        return _petersen()
    match = re.fullmatch(r"(prism|cycle)\(?(\d+)\)?", key)
    if match:
        k = int(match.group(2))
        if match.group(1) == "prism":
            return prism(k)
        if k >= 3:
            return cycle_graph(k)
    raise UnknownFixture(name)
