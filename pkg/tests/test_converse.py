from tumatch.converse import probe_converse
from tumatch.demand import market_demand_type
from tumatch.fixtures import complements_market, complements_market_stable
from tumatch.market import enumerate_stable_matchings


def test_probe_finds_unstable_market_with_non_tu_type():
    target = market_demand_type(complements_market())
    result = probe_converse(target, 2, samples=3000, seed=1)
    assert result.counterexample is not None
    assert market_demand_type(result.counterexample) == target
    assert enumerate_stable_matchings(result.counterexample) == []
    assert probe_converse(target, 2, samples=3000, seed=1) == result


def test_probe_never_succeeds_on_tu_type():
    target = market_demand_type(complements_market_stable())
    result = probe_converse(target, 2, samples=1500, seed=2)
    assert result.same_type > 0
    assert result.counterexample is None
