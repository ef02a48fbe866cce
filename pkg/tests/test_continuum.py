import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import all_pseudo_grid, lcm_denominator, random_firm_pref, random_market, random_stable_pseudo
from tumatch.continuum import (
    PseudoMatching,
    available_strict,
    available_weak,
    blair_prefers,
    choose_continuum,
    chosen,
    firm_can_block,
    individually_rational_pseudo,
    is_stable_pseudo,
    join,
    leq,
    lift_to_discrete,
    max_distance,
    transform_type1,
    transform_type2,
    support_condition_blocks,
    transform_type3,
)
from tumatch.errors import MalformedInput, PreconditionError
from tumatch.fixtures import complements_market, walkthrough_market, walkthrough_matching
from tumatch.market import NULL, DiscreteMatching, FirmPreference, Market, choose, find_blocking_coalition, is_stable

PAIR_THEN_SINGLES = FirmPreference.from_sets([{0, 1}, {1, 2}, {2}], 3)


def pm(market, shares):
    return PseudoMatching.from_dict(market, shares)


def dec(*xs):
    return tuple(F(x) for x in xs)


def slack_pseudo_matching():
    return pm(walkthrough_market(), {0: dec("0.6", "0.6", "0.3"), 1: dec("0.3", "0.3", 0)})


def test_choice_on_two_subpopulations():
    assert chosen(PAIR_THEN_SINGLES, dec("0.6", "0.6", "0.5")) == (F(3, 5), F(3, 5), F(2, 5))
    assert chosen(PAIR_THEN_SINGLES, dec("0.1", "0.4", "0.1")) == (F(1, 10), F(1, 5), F(1, 10))


def test_choice_of_zero_and_null_firm():
    out, trace = choose_continuum(PAIR_THEN_SINGLES, (0, 0, 0))
    assert out == (0, 0, 0) and all(t == 0 for t in trace.times)
    x = dec("0.3", 1, 0)
    out, trace = choose_continuum(None, x)
    assert out == x and trace.steps == ()


def test_choice_agrees_with_discrete_choice_on_integral_points():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 4)
        pref = random_firm_pref(rng, n, 8)
        for x in itertools.product((0, 1), repeat=n):
            assert chosen(pref, x) == tuple(F(v) for v in choose(pref, x))


def test_join():
    assert join(dec("0.6", "0.6", "0.4"), dec("0.5", "0.5", "0.5")) == dec("0.6", "0.6", "0.5")
    x = dec("0.2", 1, 0)
    assert join(x, x) == x and join(x, (0, 0, 0)) == x


def test_blair_order():
    f1 = walkthrough_market().firm_prefs[0]
    assert blair_prefers(f1, dec("0.6", "0.6", "0.4"), dec("0.5", "0.5", "0.5"), strict=True)
    x = dec("0.5", "0.5", "0.5")
    assert blair_prefers(f1, x, x) and not blair_prefers(f1, x, x, strict=True)
    assert not blair_prefers(f1, (0, 0, 0), x, strict=True)


def test_availability():
    market = walkthrough_market()
    M = pm(market, walkthrough_matching())
    assert available_weak(market, M, 0) == (1, F(1, 2), 1)
    zero = pm(market, {})
    assert available_weak(market, zero, 0) == (0, 0, 0)
    single = Market.build(2, firm_prefs=[[{0, 1}]], worker_prefs=[[0], []])
    M1 = pm(single, {0: dec("0.5", 0), NULL: dec("0.5", 1)})
    assert available_weak(single, M1, 0) == (1, 0)
    for f in market.firms:
        strict, weak = available_strict(market, M, f), available_weak(market, M, f)
        assert tuple(a + b for a, b in zip(strict, M.firms[f])) == weak


def test_blocking_examples():
    market = walkthrough_market()
    assert firm_can_block(market, pm(market, walkthrough_matching()), 0) is None
    m1 = complements_market()
    M = pm(m1, {1: (1, 0), NULL: (0, 1)})
    w = firm_can_block(m1, M, 0)
    assert w is not None and w.k == 0 and w.subset == (1, 1)
    zero = pm(m1, {NULL: (0, 0)})
    lonely = Market.build(2, firm_prefs=[[{0, 1}]], worker_prefs=[[], []])
    assert firm_can_block(lonely, pm(lonely, {NULL: (1, 1)}), 0) is None
    assert firm_can_block(m1, zero, 0) is None
    with pytest.raises(PreconditionError):
        firm_can_block(m1, pm(m1, {0: (1, 0)}), 0)


def test_stability_examples():
    market = walkthrough_market()
    assert is_stable_pseudo(market, pm(market, walkthrough_matching()))
    assert is_stable_pseudo(market, slack_pseudo_matching())
    bad = pm(market, {1: (0, 0, 1)})
    assert not is_stable_pseudo(market, bad)
    m1 = complements_market()
    assert is_stable_pseudo(m1, pm(m1, {0: dec("0.5", "0.5"), 1: dec("0.5", "0.5")}))


def test_type1_examples():
    market = walkthrough_market()
    M = slack_pseudo_matching()
    out = transform_type1(market, M, 0)
    assert out.firms[0] == (0, 0, 0) and out.firms[1] == M.firms[1]
    assert is_stable_pseudo(market, out)
    half = pm(market, walkthrough_matching())
    assert transform_type1(market, half, 1).firms[1] == (0, 0, 0)
    assert transform_type1(market, out, 0) == out
    full = pm(market, {0: (1, 1, 0)})
    with pytest.raises(PreconditionError):
        transform_type1(market, full, 0)


def test_type2_examples():
    market = walkthrough_market()
    out = transform_type2(market, slack_pseudo_matching(), 0, 0)
    assert out.firms[0] == (1, 1, 0) and out.firms[1] == dec("0.3", "0.3", 0)
    half = pm(market, walkthrough_matching())
    assert transform_type2(market, half, 0, 0).firms[0] == (1, 1, 0)
    snapped = pm(market, {0: (1, 1, 0)})
    assert transform_type2(market, snapped, 0, 0) == snapped
    with pytest.raises(PreconditionError):
        transform_type2(market, snapped, 0, 1)


def test_type3_examples():
    market = walkthrough_market()
    half = pm(market, walkthrough_matching())
    assert transform_type3(market, half, 2, 1).null == (0, 0, 1)
    assert transform_type3(market, half, 2, 0).null == (0, 0, 0)
    with pytest.raises(PreconditionError):
        transform_type3(market, half, 0, 1)
    with pytest.raises(PreconditionError):
        transform_type3(market, half, 2, 2)


def test_unmatched_w2_mass_lets_f1_block():
    # f1 can take w1 from f2 and w2 from the unmatched pool in equal amounts
    market = walkthrough_market()
    tilde = pm(market, {1: dec("0.3", "0.3", 0), NULL: dec(0, "0.3", 0)})
    w = firm_can_block(market, tilde, 0)
    assert w is not None and w.subset == (1, 1, 0)
    assert blocks_on_grid(market, tilde, 0)
    with pytest.raises(PreconditionError):
        transform_type3(market, tilde, 1, 0)
    assert is_stable_pseudo(market, pm(market, {1: dec("0.3", "0.3", 0)}))


def test_block_by_shifting_time_to_a_better_set():
    # the firm already holds all of w1; unmatched w2 mass lets it trade time
    # spent on {w1} for time on {w1,w2}, which the support condition misses
    market = Market.build(2, firm_prefs=[[{0, 1}, {0}]], worker_prefs=[[0], [0]])
    M = pm(market, {0: (1, F(1, 2)), NULL: (0, F(1, 2))})
    assert support_condition_blocks(market, M, 0) is None
    w = firm_can_block(market, M, 0)
    assert w is not None and w.improvement == (1, 1)
    assert blair_prefers(market.firm_prefs[0], w.improvement, M.firms[0], strict=True)
    assert blocks_on_grid(market, M, 0)
    assert not is_stable_pseudo(market, M)


def test_transforms_reject_unstable_input():
    market = walkthrough_market()
    with pytest.raises(PreconditionError):
        transform_type1(market, pm(market, {1: (0, 0, 1)}), 0)


def test_lift_walkthrough_outputs():
    market = walkthrough_market()
    final = pm(market, {0: (1, 1, 0), NULL: (0, 0, 1)})
    mu = lift_to_discrete(final)
    assert mu == DiscreteMatching((0, 0, NULL)) and is_stable(market, mu)
    assert lift_to_discrete(pm(market, {NULL: (1, 1, 1)})) == DiscreteMatching.unmatched(3)


def test_lift_of_f2_matching_is_blocked_by_f1_and_w3():
    market = walkthrough_market()
    M = pm(market, {1: (1, 1, 0), NULL: (0, 0, 1)})
    mu = lift_to_discrete(M)
    assert mu == DiscreteMatching.from_firm_sets(3, {1: [0, 1]})
    assert not is_stable_pseudo(market, M)
    assert find_blocking_coalition(market, mu) == (0, (0, 0, 1))
    fixed = DiscreteMatching.from_firm_sets(3, {0: [2], 1: [0, 1]})
    assert is_stable(market, fixed)


def test_lift_rejects_bad_input():
    market = walkthrough_market()
    with pytest.raises(MalformedInput):
        lift_to_discrete(pm(market, walkthrough_matching()))
    with pytest.raises(MalformedInput):
        lift_to_discrete(pm(market, {0: (1, 1, 0)}))


def test_subpopulation_bounds():
    with pytest.raises(MalformedInput):
        PseudoMatching(((F(3, 2),),), (0,))


# Properties


def random_instance(rng, den=12):
    n = rng.randint(1, 5)
    pref = random_firm_pref(rng, n, 6)
    x = tuple(F(rng.randint(0, den), den) for _ in range(n))
    return pref, x


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_conservation(seed):
    pref, x = random_instance(random.Random(seed))
    out, trace = choose_continuum(pref, x)
    assert leq(out, x)
    assert trace.total_time <= 1
    used = F(0)
    for step in trace.steps:
        if used == 1:
            assert step.t == 0
        used += step.t
    assert chosen(pref, out) == out


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_revealed_preference(seed):
    rng = random.Random(seed)
    pref, x = random_instance(rng)
    out = chosen(pref, x)
    x2 = tuple(c + F(rng.randint(0, 4), 4) * (a - c) for a, c in zip(x, out))
    assert leq(out, x2) and leq(x2, x)
    assert chosen(pref, x2) == out


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_continuity_modulus(seed):
    rng = random.Random(seed)
    pref, x = random_instance(rng)
    if len(pref) == 0:
        return
    y = tuple(min(F(1), max(F(0), v + F(rng.randint(-3, 3), 24))) for v in x)
    r = max_distance(x, y)
    bound = 2 ** len(pref) - 1
    gap = max_distance(chosen(pref, x), chosen(pref, y))
    assert gap <= bound * r
    v = r + F(1, rng.randint(1, 1000))
    assert gap < bound * v


def blocks_on_grid(market, M, f):
    """Some grid point strictly Blair-preferred by ``f`` and within its availability."""
    den = lcm_denominator([v for row in M.firms + (M.null,) for v in row])
    avail = available_weak(market, M, f)
    pref = market.firm_prefs[f]
    for cand in all_pseudo_grid(market.n_workers, den):
        if leq(cand, avail) and blair_prefers(pref, cand, M.firms[f], strict=True):
            return True
    return False


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_exact_blocking_test_agrees_with_grid_search(seed):
    rng = random.Random(seed)
    market = random_market(rng, max_n=3, max_m=2, max_sets=3)
    den = rng.choice((1, 2, 3, 4))
    shares = {}
    for f in market.firms:
        x = [F(rng.randint(0, den), den) if market.worker_prefs[w].accepts(f) else F(0)
             for w in market.workers]
        shares[f] = chosen(market.firm_prefs[f], x)
    shares[NULL] = tuple(F(rng.randint(0, den), den) for _ in market.workers)
    M = pm(market, shares)
    assert individually_rational_pseudo(market, M)
    for f in market.firms:
        assert (firm_can_block(market, M, f) is not None) == blocks_on_grid(market, M, f)


def applicable_transforms(market, M):
    for f in market.firms:
        _, trace = choose_continuum(market.firm_prefs[f], M.firms[f])
        if trace.total_time < 1:
            yield transform_type1(market, M, f)
        for step in trace.steps:
            if step.t > 0:
                yield transform_type2(market, M, f, step.k)
    for w in market.workers:
        if 0 < M.null[w] < 1:
            yield transform_type3(market, M, w, 0)
            yield transform_type3(market, M, w, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_transformations_preserve_stability(seed):
    market, M = random_stable_pseudo(random.Random(seed))
    for out in applicable_transforms(market, M):
        assert is_stable_pseudo(market, out)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_transformations_preserve_stability_on_grid_samples(seed):
    rng = random.Random(seed)
    market = random_market(rng, max_n=3, max_m=2, max_sets=3)
    den = rng.choice((2, 3, 4))
    shares = {}
    for f in market.firms:
        x = [F(rng.randint(0, den), den) if market.worker_prefs[w].accepts(f) else F(0)
             for w in market.workers]
        shares[f] = chosen(market.firm_prefs[f], x)
    shares[NULL] = tuple(F(rng.randint(0, den), den) for _ in market.workers)
    M = pm(market, shares)
    if not is_stable_pseudo(market, M):
        return
    for out in applicable_transforms(market, M):
        assert is_stable_pseudo(market, out)
