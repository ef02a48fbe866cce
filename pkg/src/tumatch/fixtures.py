"""Small named markets and trees used by the tests, the CLI and the docs.

Worker and firm indices are 0-based, so ``{0, 1}`` is ``{w1, w2}``.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .market import NULL, Market
from .techtree import TechnologyTree

HALF = Fraction(1, 2)


def complements_market() -> Market:
    """f1 needs both workers together; f2 takes one; no stable matching."""
    return Market.build(
        2,
        firm_prefs=[[{0, 1}], [{0}, {1}]],
        worker_prefs=[[0, 1], [1, 0]],
    )


def complements_market_stable() -> Market:
    """Same as :func:`complements_market` but f2 also wants both workers."""
    return Market.build(
        2,
        firm_prefs=[[{0, 1}], [{0, 1}, {0}, {1}]],
        worker_prefs=[[0, 1], [1, 0]],
    )


def unimodular_not_tu_market() -> Market:
    """Three firms, three workers; unimodular but not TU demand type, no stable matching."""
    return Market.build(
        3,
        firm_prefs=[[{0, 1, 2}], [{0}, {1}], [{1, 2}]],
        worker_prefs=[[0, 1], [1, 0, 2], [0, 2]],
    )


def substitutable_not_tu_market() -> Market:
    """Both firms substitutable, yet the joint demand type is not TU.

    Worker preferences are not pinned down by the firms' data; the
    complements-market ones are used.
    """
    return Market.build(
        2,
        firm_prefs=[[{0, 1}, {0}, {1}], [{0}, {1}]],
        worker_prefs=[[0, 1], [1, 0]],
    )


def walkthrough_market() -> Market:
    """Two firms, three workers; admits the fractional stable matching
    :func:`walkthrough_matching`."""
    return Market.build(
        3,
        firm_prefs=[[{0, 1}, {2}], [{0, 1}]],
        worker_prefs=[[0, 1], [1, 0], [0]],
    )


def walkthrough_matching() -> dict:
    """Fractional stable matching of :func:`walkthrough_market`, keyed by firm."""
    return {
        0: (HALF, HALF, HALF),
        1: (HALF, HALF, 0),
        NULL: (0, 0, HALF),
    }


def complements_fractional_matching() -> dict:
    """The only stable continuum matching of :func:`complements_market`."""
    return {0: (HALF, HALF), 1: (HALF, HALF), NULL: (0, 0)}


def specialist_tree() -> TechnologyTree:
    """Root, v1 = {w1,w2}, v2 = {w3}, v3 = {w3,w4}; edges v0v1, v0v2, v2v3."""
    return TechnologyTree.build(
        4,
        vertices=[set(), {0, 1}, {2}, {2, 3}],
        edges=[(0, 1), (0, 2), (2, 3)],
    )


def specialist_tree_market() -> Market:
    """Unit-demand preferences over :func:`specialist_tree`.

    Worker preferences are not part of the tree data; every worker ranks
    f1 over f2 here.
    """
    return Market.build(
        4,
        firm_prefs=[[{0, 1}, {2}], [{2, 3}, {0, 1}]],
        worker_prefs=[[0, 1]] * 4,
    )


def chain_tree_for_complements() -> TechnologyTree:
    """v1 = {w1}, v2 = {w2}, v3 = {w1,w2} under v2; w1 upgrades twice."""
    return TechnologyTree.build(2, vertices=[set(), {0}, {1}, {0, 1}], edges=[(0, 1), (0, 2), (2, 3)])


def star_tree_for_complements() -> TechnologyTree:
    """v1 = {w1}, v2 = {w2}, v3 = {w1,w2}, all children of the root."""
    return TechnologyTree.build(2, vertices=[set(), {0}, {1}, {0, 1}], edges=[(0, 1), (0, 2), (0, 3)])


MARKETS = {
    "complements": complements_market,
    "complements-stable": complements_market_stable,
    "unimodular-not-tu": unimodular_not_tu_market,
    "substitutable-not-tu": substitutable_not_tu_market,
    "walkthrough": walkthrough_market,
    "specialist-tree": specialist_tree_market,
}

TREES = {
    "specialist": specialist_tree,
    "chain-complements": chain_tree_for_complements,
    "star-complements": star_tree_for_complements,
}


def data_path(name: str) -> Path:
    """Path of a JSON file shipped in the package's ``data`` directory."""
    return Path(__file__).resolve().parent / "data" / name
