"""Exact Hamiltonian-cycle search used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import BudgetExhausted
from .graph import Graph, edge

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class CycleCertificate:
    order: tuple

    def validate(self, g: Graph) -> bool:
        return is_hamiltonian_cycle(g, self.order)


def is_hamiltonian_cycle(g: Graph, order) -> bool:
    order = list(order)
    if len(order) != g.n or set(order) != set(g.nodes):
        return False
    if g.n < 3:
        return False
    return all(g.has_edge(order[i - 1], order[i]) for i in range(g.n))


def find_hamiltonian(g: Graph, budget: int = DEFAULT_BUDGET) -> CycleCertificate | None:
    """Depth-first path extension from node 1 with forced-edge pruning.

    Every node needs two cycle edges, so a node of degree 2 forces both of
    its edges, and an unvisited node left with fewer than two usable
    neighbours kills the branch. Raises ``BudgetExhausted`` after ``budget``
    node expansions.
    """
    n = g.n
    if n < 3:
        return None
    adj = g.adj
    if any(len(adj[v]) < 2 for v in g.nodes):
        return None
    start = 1
    path = [start]
    on_path = [False] * (n + 1)
    on_path[start] = True
    expansions = 0

    def options(v, last):
        # neighbours that could still carry one of v's two cycle edges
        return sum(1 for w in adj[v] if not on_path[w] or w == last or w == start)

    def dead(last):
        return any(not on_path[v] and options(v, last) < 2 for v in g.nodes)

    def extend(last):
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise BudgetExhausted(f"more than {budget} expansions")
        if len(path) == n:
            return start in adj[last]
        nxt = [w for w in adj[last] if not on_path[w]]
        # a neighbour with exactly two options must use the edge to ``last`` now
        forced = [w for w in nxt if len(path) > 1 and options(w, last) == 2]
        if len(forced) > 1:
            return False
        for w in forced or nxt:
            path.append(w)
            on_path[w] = True
            if not dead(w) and extend(w):
                return True
            on_path[w] = False
            path.pop()
        return False

    if extend(start):
        return CycleCertificate(tuple(path))
    return None


def naive_hamiltonian(g: Graph) -> CycleCertificate | None:
    """All-permutations search; only for tiny graphs."""
    rest = [v for v in g.nodes if v != 1]
    for perm in permutations(rest):
        order = (1, *perm)
        if is_hamiltonian_cycle(g, order):
            return CycleCertificate(order)
    return None


def cycle_edges(order) -> set:
    return {edge(order[i - 1], order[i]) for i in range(len(order))}
