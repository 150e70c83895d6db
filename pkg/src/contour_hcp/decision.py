"""Contour parameters of a weighted pair and the resulting Hamiltonicity claim."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PipelineError
from .objects import BasicObject
from .weighting import (
    MAX_FREE_GROUPS,
    NodeWeighting,
    PolarityChoice,
    assign_weights,
    correct,
    enumerate_choices,
    pair_constraints,
)


def parameters(obj: BasicObject, w: NodeWeighting) -> tuple[int, int, int]:
    """(L, S, H): contour-edge sum, window sum and their total."""
    L = sum(w.pair(u, v) for u, v in obj.contour_edges)
    S = sum(w.pair(u, v) for u, v in obj.windows)
    return L, S, L + S


@dataclass
class Verdict:
    L1: int = 0
    S1: int = 0
    L2: int = 0
    S2: int = 0
    hamiltonian_claimed: bool = False
    witness_choice: PolarityChoice | None = None
    choices_tried: int = 0
    choices_failed: int = 0
    one_equality_choices: int = 0
    short_circuit: bool = False
    weightings: list = field(default_factory=list, repr=False)

    @property
    def H1(self) -> int:
        return self.L1 + self.S1

    @property
    def H2(self) -> int:
        return self.L2 + self.S2

    def to_json(self) -> dict:
        return {
            "L1": self.L1, "S1": self.S1, "H1": self.H1,
            "L2": self.L2, "S2": self.S2, "H2": self.H2,
            "hamiltonian_claimed": self.hamiltonian_claimed,
            "witness_choice": self.witness_choice.describe() if self.witness_choice else None,
            "choices_tried": self.choices_tried,
            "choices_failed": self.choices_failed,
            "one_equality_choices": self.one_equality_choices,
            "short_circuit": self.short_circuit,
        }


def weigh(pair, choice: PolarityChoice, common_nodes) -> tuple[NodeWeighting, NodeWeighting]:
    w1, w2 = assign_weights(pair, choice)
    return correct(pair.first, w1, common_nodes), correct(pair.second, w2, common_nodes)


def decide(pair, cap: int = MAX_FREE_GROUPS, counters=None, keep_weightings=False) -> Verdict:
    """Try every polarity choice; claim Hamiltonian iff one equalises L and S.

    The first witness in enumeration order wins. Without a witness the
    verdict carries the closest miss (smallest |L1-L2| + |S1-S2|).
    """
    cons = pair_constraints(pair)
    if counters is not None:
        counters["weighting_propagations"] += cons.propagations
        counters["free_groups"] = len(cons.groups)
    common = cons.subgraph.common_nodes
    verdict = Verdict()
    best = None
    last_error = None
    for choice in enumerate_choices(pair, cap, cons):
        verdict.choices_tried += 1
        try:
            w1, w2 = weigh(pair, choice, common)
        except PipelineError as exc:
            verdict.choices_failed += 1
            last_error = exc
            continue
        L1, S1, _ = parameters(pair.first, w1)
        L2, S2, _ = parameters(pair.second, w2)
        if keep_weightings:
            verdict.weightings.append((choice, w1, w2))
        if (L1 == L2) != (S1 == S2):
            verdict.one_equality_choices += 1
        gap = abs(L1 - L2) + abs(S1 - S2)
        if best is None or gap < best[0]:
            best = (gap, L1, S1, L2, S2, choice)
        if gap == 0:
            verdict.hamiltonian_claimed = True
            break
    if counters is not None:
        counters["choices_tried"] += verdict.choices_tried
    if best is None:
        raise last_error
    _, verdict.L1, verdict.S1, verdict.L2, verdict.S2, choice = best
    verdict.witness_choice = choice if verdict.hamiltonian_claimed else None
    return verdict


@dataclass(frozen=True)
class UnionCheck:
    union_contour_sums: tuple
    union_window_sums: tuple
    union_interior_sums: tuple
    equalities_preserved: bool


def union_check(pair, w1: NodeWeighting, w2: NodeWeighting) -> UnionCheck:
    """Sum both weightings edge by edge and re-evaluate each object."""
    def both(u, v):
        return w1.pair(u, v) + w2.pair(u, v)

    objs = (pair.first, pair.second)
    contour = tuple(sum(both(*e) for e in o.contour_edges) for o in objs)
    windows = tuple(sum(both(*e) for e in o.windows) for o in objs)
    interior = tuple(sum(both(*e) for e in o.interior_edges) for o in objs)
    L1, S1, _ = parameters(pair.first, w1)
    L2, S2, _ = parameters(pair.second, w2)
    preserved = ((L1 == L2) == (contour[0] == contour[1])
                 and (S1 == S2) == (windows[0] == windows[1]))
    return UnionCheck(contour, windows, interior, preserved)
