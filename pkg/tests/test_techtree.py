import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import tu_bruteforce
from tumatch.demand import is_totally_unimodular, market_demand_type
from tumatch.errors import MalformedInput, PreconditionError
from tumatch.fixtures import (
    chain_tree_for_complements,
    specialist_tree,
    specialist_tree_market,
    star_tree_for_complements,
)
from tumatch.market import Market
from tumatch.rounding import solve
from tumatch.techtree import (
    TechnologyTree,
    all_specialists,
    certify_specialist_market,
    complete_graph_edges,
    is_specialist,
    is_unit_demand_over_tree,
    network_matrices,
    non_specialists,
    random_specialist_tree,
    random_unit_demand_market,
    tree_edge_matrix,
)

H = [
    [1, 0, 0, -1, -1, 0],
    [0, 1, 1, 1, 1, 0],
    [0, 0, 1, 0, 1, 1],
]


def signed_columns(matches):
    return {(m.sign, m.column + 1) for m in matches}


def test_specialist_tree_matrices():
    tree = specialist_tree()
    mats = network_matrices(tree)
    assert mats.graph_edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert mats.h == H
    assert mats.h_workers == [H[0], H[0], H[1], H[2]]
    assert [tree.edge_name(e) for e in range(3)] == ["v0v1", "v0v2", "v2v3"]


def test_specialist_checks():
    tree = specialist_tree()
    assert all(is_specialist(tree, w) for w in range(4))
    for bad in (chain_tree_for_complements(), star_tree_for_complements()):
        assert not all_specialists(bad)
        assert non_specialists(bad)[0] == 0
    assert chain_tree_for_complements().engagements(0) == [0, 2]
    unused = TechnologyTree.build(2, [set(), {0}], [(0, 1)])
    assert not is_specialist(unused, 1)


def test_unit_demand_checks():
    tree = specialist_tree()
    assert is_unit_demand_over_tree(specialist_tree_market(), tree)
    off_tree = Market.build(4, firm_prefs=[[{0, 2}]], worker_prefs=[[0]] * 4)
    assert not is_unit_demand_over_tree(off_tree, tree)
    empty = Market.build(4, firm_prefs=[[]], worker_prefs=[[]] * 4)
    assert is_unit_demand_over_tree(empty, tree)


def test_specialist_certificate():
    cert = certify_specialist_market(specialist_tree_market(), specialist_tree())
    assert cert.ok
    f1, f2 = cert.matches
    assert signed_columns(f1) == {(1, 1), (1, 2), (-1, 4)}
    assert signed_columns(f2) == {(1, 1), (1, 3), (1, 5)}


def test_single_edge_tree():
    tree = TechnologyTree.build(1, [set(), {0}], [(0, 1)])
    mats = network_matrices(tree)
    assert mats.h == [[1]] and mats.h_workers == [[1]]
    market = Market.build(1, firm_prefs=[[{0}]], worker_prefs=[[0]])
    assert certify_specialist_market(market, tree).ok


def test_preconditions():
    with pytest.raises(PreconditionError):
        network_matrices(chain_tree_for_complements())
    assert tree_edge_matrix(chain_tree_for_complements())
    off_tree = Market.build(4, firm_prefs=[[{0, 2}]], worker_prefs=[[0]] * 4)
    with pytest.raises(PreconditionError):
        certify_specialist_market(off_tree, specialist_tree())


def test_tree_validation():
    with pytest.raises(MalformedInput):
        TechnologyTree.build(1, [{0}, {0}], [(0, 1)])
    with pytest.raises(MalformedInput):
        TechnologyTree.build(2, [set(), {0}, {1}], [(0, 1), (1, 2)])
    with pytest.raises(MalformedInput):
        TechnologyTree.build(1, [set(), {0}], [])
    with pytest.raises(MalformedInput):
        TechnologyTree.build(1, [set(), {0}, {0}], [(0, 1), (0, 2), (1, 2)])


def test_orientation_does_not_change_tu():
    tree = specialist_tree()
    flipped = tree_edge_matrix(tree, orientation_seed=7)
    assert complete_graph_edges(tree, 7) != complete_graph_edges(tree)
    assert is_totally_unimodular(flipped)
    for a, b in zip(flipped, H):
        assert all(x in (y, -y) for x, y in zip(a, b))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_network_matrices_are_tu(seed):
    rng = random.Random(seed)
    tree = random_specialist_tree(rng, max_vertices=6, max_workers=6)
    assert all_specialists(tree)
    mats = network_matrices(tree, orientation_seed=rng.choice([None, seed]))
    assert tu_bruteforce(mats.h)
    assert is_totally_unimodular(mats.h_workers)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_row_repetition_identity(seed):
    tree = random_specialist_tree(random.Random(seed))
    mats = network_matrices(tree)
    distinct = []
    for row in mats.h_workers:
        if row not in distinct:
            distinct.append(row)
    assert sorted(distinct) == sorted(mats.h)
    for e in range(len(tree.edges)):
        assert mats.h_workers.count(mats.h[e]) == sum(tree.edge_workers(e))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_random_specialist_markets_end_to_end(seed):
    rng = random.Random(seed)
    tree = random_specialist_tree(rng)
    market = random_unit_demand_market(rng, tree)
    cert = certify_specialist_market(market, tree)
    assert cert.ok
    assert is_totally_unimodular(market_demand_type(market).matrix())
    r = solve(market, oracle_check=True)
    assert r.ok and r.matching in r.oracle
