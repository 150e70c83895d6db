import random

import pytest
from hypothesis import given, strategies as st

from contour_hcp.errors import NoEligibleNode, TargetNotOnContour, TooManyFreeGroups
from contour_hcp.graph import Graph
from contour_hcp.objects import initial_object
from contour_hcp.weighting import (
    NodeWeighting, assign_weights, correct, eligible_nodes, enumerate_choices,
    extract_common_subgraph, interior_sum, pair_constraints, parse_weighting, select_single,
    serialize_weighting,
)
from contour_hcp.construction import ObjectPair, preliminary_second
from objgen import random_object, random_pairs


@pytest.fixture(scope="module")
def pairs():
    return random_pairs(31, 40)


def contour_elements(obj):
    return list(obj.pairs)


def check_single(obj, m, n):
    w = select_single(obj, (m, n))
    assert set(w.half_weights) == set(obj.contour)
    assert set(w.half_weights.values()) <= {1, -1}
    target = frozenset((m, n))
    weights = {frozenset(p): w.pair(*p) for p in contour_elements(obj)}
    if len(obj.contour) % 2:
        assert w.node(m) == w.node(n) == -1
        assert weights[target] == -1
        assert all(x == 0 for p, x in weights.items() if p != target)
    else:
        assert (w.node(m), w.node(n)) == (1, -1)
        assert all(x == 0 for x in weights.values())
    assert all(w.pair(u, v) in (-1, 0, 1) for u, v in obj.interior_edges)


def test_select_single_both_parities_on_random_objects():
    rng = random.Random(11)
    parities = {0: 0, 1: 0}
    done = 0
    while done < 200:
        o = random_object(rng, rng.randint(5, 15), rng.randint(0, 3))
        if o is None:
            continue
        pairs = contour_elements(o)
        m, n = rng.choice(pairs)
        if rng.random() < 0.5:
            m, n = n, m
        check_single(o, m, n)
        parities[len(o.contour) % 2] += 1
        done += 1
    assert min(parities.values()) > 40


def test_select_single_g25_window(g25_first):
    w = select_single(g25_first, (2, 6))
    nonzero = [p for p in g25_first.pairs if w.pair(*p) != 0]
    assert len(nonzero) == 1 and set(nonzero[0]) == {2, 6}
    assert (2, 6) in g25_first.windows or (6, 2) in g25_first.windows


def test_select_single_odd_cycle_like():
    g = Graph.from_edges(7, [(i, i % 7 + 1) for i in range(1, 8)])
    o = initial_object(g, range(1, 8))
    for m in range(1, 8):
        w = select_single(o, (m, m % 7 + 1))
        assert sum(w.pair(u, v) for u, v in o.pairs) == -1


def test_select_single_rejects_non_contour_pair(g25_first):
    with pytest.raises(TargetNotOnContour):
        select_single(g25_first, (1, 25))


def test_common_subgraph_identical_and_disjoint(g25_first, pairs):
    same = extract_common_subgraph(ObjectPair(g25_first, g25_first))
    assert same.common_edges == g25_first.contour_edges
    prelim = preliminary_second(g25_first).object
    apart = extract_common_subgraph(ObjectPair(g25_first, prelim))
    assert apart.common_edges == frozenset() and apart.islands == ()
    for pair in pairs:
        sub = extract_common_subgraph(pair)
        assert sub.common_edges == pair.first.contour_edges & pair.second.contour_edges
        assert not sub.linking_edges & sub.common_edges
        for e in sub.linking_edges:
            assert set(e) <= sub.common_nodes
        covered = {v for isl in sub.islands for v in isl.nodes}
        assert sub.common_nodes <= covered


def test_pair_weighting_properties(pairs):
    checked = 0
    for pair in pairs:
        cons = pair_constraints(pair)
        common = cons.subgraph.common_nodes
        for choice in enumerate_choices(pair, constraints=cons)[:16]:
            w1, w2 = assign_weights(pair, choice)
            for w, obj in ((w1, pair.first), (w2, pair.second)):
                assert set(w.half_weights) == set(obj.graph.nodes)
                assert set(w.half_weights.values()) <= {1, -1}
            for e in cons.subgraph.common_edges:
                assert w1.pair(*e) == w2.pair(*e)
            try:
                c1 = correct(pair.first, w1, common)
                c2 = correct(pair.second, w2, common)
            except NoEligibleNode:
                continue
            assert interior_sum(pair.first, c1) == 0 and interior_sum(pair.second, c2) == 0
            for e in cons.subgraph.common_edges:
                assert c1.pair(*e) == c2.pair(*e)
            checked += 1
    assert checked > 50


def test_enumerate_choices_order_and_cap(pairs):
    pair = pairs[0]
    cons = pair_constraints(pair)
    k = len(cons.groups)
    choices = enumerate_choices(pair, constraints=cons)
    assert len(choices) == 2 ** k
    assert choices[0].signs == (1,) * k and choices[-1].signs == (-1,) * k
    assert [c.signs for c in choices] == sorted((c.signs for c in choices), reverse=True)
    if k:
        with pytest.raises(TooManyFreeGroups):
            enumerate_choices(pair, cap=k - 1, constraints=cons)


def test_free_groups_partition_layer_vertices(pairs):
    for pair in pairs[:10]:
        cons = pair_constraints(pair)
        members = [x for g in cons.groups for x, _ in g.members]
        assert sorted(members) == sorted((k, v) for k in (1, 2) for v in pair.first.graph.nodes)
        for g in cons.groups:
            assert (g.anchor, 0) in g.members


def test_correct_flips_only_eligible_nodes():
    rng = random.Random(5)
    seen = 0
    for _ in range(400):
        o = random_object(rng, rng.randint(6, 12), rng.randint(1, 3))
        if o is None:
            continue
        w = NodeWeighting({v: rng.choice((1, -1)) for v in o.graph.nodes})
        try:
            c = correct(o, w)
        except NoEligibleNode:
            continue
        allowed = set(eligible_nodes(o, frozenset()))
        changed = {v for v in o.graph.nodes if c.node(v) != w.node(v)}
        assert changed <= allowed
        assert interior_sum(o, c) == 0
        seen += 1
    assert seen > 50


def test_correct_leaves_balanced_weighting_alone():
    g = Graph.from_edges(6, [(i, i % 6 + 1) for i in range(1, 7)] + [(1, 4)])
    o = initial_object(g, range(1, 7))
    w = NodeWeighting({1: 1, 2: 1, 3: -1, 4: -1, 5: 1, 6: 1})
    assert interior_sum(o, w) == 0 and correct(o, w) is w
    plus = NodeWeighting(dict.fromkeys(range(1, 7), 1))
    assert correct(o, plus) == plus.flipped(1)
    with pytest.raises(NoEligibleNode):
        correct(o, plus, common_nodes=frozenset({1, 4}))


@given(st.dictionaries(st.integers(1, 500), st.sampled_from((1, -1)), max_size=40))
def test_weighting_serialization_roundtrip(hw):
    w = NodeWeighting(hw)
    assert parse_weighting(serialize_weighting(w)) == w


def test_parse_weighting_rejects_bad_lines():
    with pytest.raises(ValueError):
        parse_weighting("node 1 +0.5\n")
