"""Instance generation: exhaustive small classes and seeded random graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, combinations

from .errors import InfeasibleSpec
from .graph import Graph, edge


# --- canonical form --------------------------------------------------------

def _refine(adj, colors):
    """Colour refinement to a stable partition; colours are dense ranks."""
    n_cells = len(set(colors.values()))
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in adj}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        colors = {v: ranks[sig[v]] for v in adj}
        if len(ranks) == n_cells:
            return colors
        n_cells = len(ranks)


def _canonical(n: int, edges) -> tuple:
    """Canonical edge multiset of a pseudograph on nodes 1..n.

    ``edges`` may repeat pairs and contain loops ``(v, v)``. The result is the
    lexicographically smallest sorted relabelled edge tuple over the leaves of
    an individualisation-refinement search.
    """
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(adj, colors)
        cells: dict[int, list[int]] = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            form = tuple(sorted(edge(colors[u] + 1, colors[v] + 1) for u, v in edges))
            if best is None or form < best:
                best = form
            return
        for v in sorted(cells[target]):
            nxt = {u: 2 * c for u, c in colors.items()}
            nxt[v] = 2 * target - 1
            search(nxt)

    search({v: 0 for v in adj})
    return best


def canonical_form(g: Graph) -> tuple:
    return _canonical(g.n, g.sorted_edges())


def canonical_graph(g: Graph) -> Graph:
    return Graph(g.n, frozenset(canonical_form(g)))


# --- exhaustive cubic ------------------------------------------------------
#
# Connected cubic pseudographs (loops and parallel edges allowed) are grown
# from three seeds. Any such graph on n >= 4 nodes reduces to a smaller one:
# either delete a non-bridge, non-loop edge and smooth its two ends, or, when
# every non-loop edge is a bridge, contract a node carrying two loop leaves
# into a single loop leaf. The one irreducible case is the star on 4 nodes.
# Simple graphs are filtered out at the end.

_THETA = ((1, 2), (1, 2), (1, 2))
_DUMBBELL = ((1, 1), (1, 2), (2, 2))
_STAR = ((1, 2), (1, 3), (1, 4), (2, 2), (3, 3), (4, 4))


def _insertions(n: int, edges: tuple):
    """Subdivide two edge instances (or one instance twice) and join the new nodes."""
    a, b = n + 1, n + 2
    for i in range(len(edges)):
        for j in range(i, len(edges)):
            rest = [e for k, e in enumerate(edges) if k not in (i, j)]
            p, q = edges[i]
            if i == j:
                rest += [(p, a), (a, b), (a, b), (b, q)]
            else:
                r, s = edges[j]
                rest += [(p, a), (a, q), (r, b), (b, s), (a, b)]
            yield tuple(sorted(edge(u, v) for u, v in rest))


def _loop_expansions(n: int, edges: tuple):
    """Swap the loop at a node for edges to two new loop leaves."""
    l1, l2 = n + 1, n + 2
    for i, (u, v) in enumerate(edges):
        if u == v:
            rest = [e for k, e in enumerate(edges) if k != i]
            rest += [(u, l1), (u, l2), (l1, l1), (l2, l2)]
            yield tuple(sorted(rest))


def _defects(edges: tuple) -> int:
    """Loops plus surplus parallel copies; one insertion repairs at most two."""
    return sum(1 for u, v in edges if u == v) + len(edges) - len(set(edges))


def _is_simple(edges: tuple) -> bool:
    return _defects(edges) == 0


@lru_cache(maxsize=None)
def _pseudo_level(size: int, target: int) -> frozenset:
    """Canonical connected cubic pseudographs on ``size`` nodes that can still
    become simple by ``target`` nodes."""
    budget = target - size
    if size == 2:
        seeds = (_THETA, _DUMBBELL)
        return frozenset(_canonical(2, e) for e in seeds if _defects(e) <= budget)
    found = {_canonical(4, _STAR)} if size == 4 and _defects(_STAR) <= budget else set()
    for form in sorted(_pseudo_level(size - 2, target)):
        for edges in chain(_insertions(size - 2, form), _loop_expansions(size - 2, form)):
            if _defects(edges) <= budget:
                found.add(_canonical(size, edges))
    return frozenset(found)


def cubic_classes(n: int) -> list[Graph]:
    """All connected simple cubic graphs on ``n`` nodes, one per isomorphism class."""
    if n % 2 or n < 4:
        raise InfeasibleSpec(f"no cubic graph on {n} nodes")
    return [Graph(n, frozenset(f)) for f in sorted(_pseudo_level(n, n))]


# --- exhaustive subcubic ---------------------------------------------------

def subcubic_classes(n: int) -> list[Graph]:
    """Connected graphs with degrees in {2, 3} on ``n`` nodes, up to isomorphism.

    Built level by level: every graph of maximum degree 3 with m + 1 edges
    arises from one with m edges by adding an edge.
    """
    if n < 3:
        raise InfeasibleSpec(f"n={n} too small")
    level = {()}
    found = []
    while level:
        nxt = set()
        for form in sorted(level):
            g = Graph(n, frozenset(form))
            degs = {v: g.degree(v) for v in g.nodes}
            if min(degs.values()) >= 2 and g.is_connected():
                found.append(g)
            for u, v in combinations(g.nodes, 2):
                if degs[u] < 3 and degs[v] < 3 and (u, v) not in g.edges:
                    nxt.add(canonical_form(Graph(n, g.edges | {(u, v)})))
        level = nxt
    return sorted(found, key=lambda g: (len(g.edges), g.sorted_edges()))


# --- random ----------------------------------------------------------------

def random_graph(n: int, rng: random.Random, cubic: bool = False,
                 p_deg2: float = 0.25, max_tries: int = 10_000) -> Graph:
    """Connected simple graph with degrees in {2, 3} by rejection-sampled stub pairing."""
    if cubic and n % 2:
        raise InfeasibleSpec(f"no cubic graph on {n} nodes")
    for _ in range(max_tries):
        degs = [3 if cubic or rng.random() >= p_deg2 else 2 for _ in range(n)]
        if sum(degs) % 2:
            continue
        stubs = [v for v, d in enumerate(degs, 1) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = {edge(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)}
        if len(pairs) * 2 != len(stubs) or any(u == v for u, v in pairs):
            continue
        g = Graph(n, frozenset(pairs))
        if g.is_connected():
            return g
    raise InfeasibleSpec(f"could not sample a graph on {n} nodes")


@dataclass(frozen=True)
class GenSpec:
    n: int
    mode: str = "exhaustive"  # or "random"
    count: int = 0
    seed: int = 0
    cubic: bool = False

    def __post_init__(self):
        if self.n < 4:
            raise InfeasibleSpec("n must be at least 4")
        if self.mode not in ("exhaustive", "random"):
            raise InfeasibleSpec(f"unknown mode {self.mode!r}")
        if self.cubic and self.n % 2:
            raise InfeasibleSpec(f"no cubic graph on {self.n} nodes")


def generate(spec: GenSpec):
    """Yield ``(graph_id, Graph)`` pairs in a deterministic order."""
    kind = "cubic" if spec.cubic else "sub"
    if spec.mode == "exhaustive":
        graphs = cubic_classes(spec.n) if spec.cubic else subcubic_classes(spec.n)
        for i, g in enumerate(graphs):
            yield f"{kind}-n{spec.n:02d}-{i:05d}", g
        return
    rng = random.Random(f"{spec.seed}:{spec.n}:{kind}")
    for i in range(spec.count):
        yield f"rand-{kind}-n{spec.n:02d}-s{spec.seed}-{i:05d}", random_graph(spec.n, rng, spec.cubic)
