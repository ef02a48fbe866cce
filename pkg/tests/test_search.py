import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_market
from tumatch.continuum import PseudoMatching, is_stable_pseudo
from tumatch.errors import MalformedInput, SearchExhausted
from tumatch.fixtures import (
    complements_fractional_matching,
    complements_market,
    complements_market_stable,
    walkthrough_market,
    walkthrough_matching,
)
from tumatch.market import NULL, DiscreteMatching, Market, enumerate_stable_matchings
from tumatch.search import SearchConfig, find_stable_continuum, verify_stable_continuum

HALF = F(1, 2)


def test_verify_examples():
    assert verify_stable_continuum(walkthrough_market(), PseudoMatching.from_dict(walkthrough_market(), walkthrough_matching()))
    m1 = complements_market()
    assert verify_stable_continuum(m1, PseudoMatching.from_dict(m1, complements_fractional_matching()))
    # the worker does not list the firm holding it
    lonely = Market.build(1, firm_prefs=[[{0}]], worker_prefs=[[]])
    bad = PseudoMatching.from_dict(lonely, {0: (1,), NULL: (0,)})
    assert not verify_stable_continuum(lonely, bad)


def test_verify_requires_unit_column_sums():
    m1 = complements_market()
    half_missing = PseudoMatching.from_dict(m1, {0: (HALF, HALF), 1: (HALF, HALF), NULL: (0, HALF)})
    assert not verify_stable_continuum(m1, half_missing)
    with pytest.raises(MalformedInput):
        verify_stable_continuum(m1, PseudoMatching.from_dict(walkthrough_market(), walkthrough_matching()))


def test_find_on_stable_complements_market():
    market = complements_market_stable()
    M = find_stable_continuum(market)
    assert verify_stable_continuum(market, M)
    assert M == PseudoMatching.from_discrete(market, DiscreteMatching((1, 1)))


def test_find_on_unstable_discrete_market():
    market = complements_market()
    expected = PseudoMatching.from_dict(market, complements_fractional_matching())
    try:
        M = find_stable_continuum(market)
    except SearchExhausted:
        return
    assert verify_stable_continuum(market, M)
    assert M == expected


def test_empty_market_gives_all_null():
    market = Market.build(3, firm_prefs=[[], []], worker_prefs=[[], [0], [1, 0]])
    M = find_stable_continuum(market)
    assert M.null == (1, 1, 1)
    assert all(v == 0 for row in M.firms for v in row)


def test_user_matching_comes_first():
    market = walkthrough_market()
    user = PseudoMatching.from_dict(market, walkthrough_matching())
    assert find_stable_continuum(market, SearchConfig(user_matching=user)) == user
    only_user = SearchConfig(sources=("user",), user_matching=user)
    assert find_stable_continuum(market, only_user) == user


def test_unstable_user_matching_is_not_trusted():
    market = complements_market()
    unstable = PseudoMatching.from_dict(market, {1: (1, 0), NULL: (0, 1)})
    with pytest.raises(SearchExhausted):
        find_stable_continuum(market, SearchConfig(sources=("user",), user_matching=unstable))


def test_oracle_only_source_on_market_without_discrete_stability():
    with pytest.raises(SearchExhausted):
        find_stable_continuum(complements_market(), SearchConfig(sources=("oracle",)))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(sources=("guess",))


def test_tatonnement_alone_reaches_the_half_matching():
    market = complements_market()
    M = find_stable_continuum(market, SearchConfig(sources=("tatonnement",)))
    assert M == PseudoMatching.from_dict(market, complements_fractional_matching())


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=0, max_value=2**64 - 1))
def test_search_is_sound_and_deterministic(seed, config_seed):
    market = random_market(random.Random(seed), max_n=3, max_m=3)
    config = SearchConfig(seed=config_seed, restarts=2, max_iterations=60)
    try:
        first = find_stable_continuum(market, config)
    except SearchExhausted:
        with pytest.raises(SearchExhausted):
            find_stable_continuum(market, config)
        return
    assert verify_stable_continuum(market, first)
    assert is_stable_pseudo(market, first)
    assert find_stable_continuum(market, config) == first


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_oracle_lift_is_found_when_discrete_stable_exists(seed):
    market = random_market(random.Random(seed), max_n=3, max_m=2)
    found = enumerate_stable_matchings(market)
    if found:
        M = find_stable_continuum(market, SearchConfig(sources=("oracle",)))
        assert M == PseudoMatching.from_discrete(market, found[0])
