import random

import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas_g

from conftest import to_nx
from contour_hcp.errors import InfeasibleSpec
from contour_hcp.generate import (
    GenSpec, canonical_form, cubic_classes, generate, random_graph, subcubic_classes,
)
from contour_hcp.graph import Graph

CUBIC_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19}


@pytest.mark.parametrize("n,count", sorted(CUBIC_COUNTS.items()))
def test_cubic_class_counts(n, count):
    graphs = cubic_classes(n)
    assert len(graphs) == count
    for g in graphs:
        assert g.is_cubic() and g.is_connected()
    nxs = [to_nx(g) for g in graphs]
    for i in range(len(nxs)):
        for j in range(i + 1, len(nxs)):
            assert not nx.is_isomorphic(nxs[i], nxs[j])


def atlas_subcubic(n):
    return [h for h in graph_atlas_g() if h.number_of_nodes() == n and nx.is_connected(h)
            and all(d in (2, 3) for _, d in h.degree())]


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_subcubic_classes_match_atlas(n):
    ours = [to_nx(g) for g in subcubic_classes(n)]
    ref = atlas_subcubic(n)
    assert len(ours) == len(ref)
    for h in ref:
        assert sum(nx.is_isomorphic(h, x) for x in ours) == 1


def test_canonical_form_is_label_invariant():
    rng = random.Random(3)
    for _ in range(40):
        g = random_graph(rng.randint(6, 14), rng)
        perm = list(g.nodes)
        rng.shuffle(perm)
        relabel = dict(zip(g.nodes, perm))
        h = Graph.from_edges(g.n, [(relabel[u], relabel[v]) for u, v in g.edges])
        assert canonical_form(g) == canonical_form(h)


def test_random_graphs_are_valid_and_deterministic():
    a = list(generate(GenSpec(14, "random", 30, seed=7)))
    b = list(generate(GenSpec(14, "random", 30, seed=7)))
    assert a == b
    assert [gid for gid, _ in a][:2] == ["rand-sub-n14-s7-00000", "rand-sub-n14-s7-00001"]
    for _, g in a:
        assert g.is_connected()
        assert all(g.degree(v) in (2, 3) for v in g.nodes)
    c = list(generate(GenSpec(14, "random", 30, seed=8)))
    assert a != c


def test_exhaustive_ids():
    ids = [gid for gid, _ in generate(GenSpec(8, cubic=True))]
    assert ids == [f"cubic-n08-{i:05d}" for i in range(5)]


@pytest.mark.parametrize("kwargs", [
    dict(n=7, cubic=True), dict(n=3), dict(n=10, mode="bogus"),
])
def test_infeasible_specs(kwargs):
    with pytest.raises(InfeasibleSpec):
        GenSpec(**kwargs)


def test_odd_cubic_rejected():
    with pytest.raises(InfeasibleSpec):
        cubic_classes(9)
    with pytest.raises(InfeasibleSpec):
        random_graph(9, random.Random(0), cubic=True)
