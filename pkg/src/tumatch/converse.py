"""Random search for markets sharing a demand type but lacking stability.

Total unimodularity of the demand type is sufficient for every market with
that demand type to have a stable matching.  Whether it is also necessary
is not known.  This harness samples markets with a prescribed demand type
and reports the first one the brute-force oracle finds unstable.  Finding
nothing proves nothing.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .demand import DemandType, market_demand_type
from .market import Market, enumerate_stable_matchings


@dataclass(frozen=True)
class ProbeResult:
    sampled: int
    same_type: int  # sampled markets whose demand type equals the target
    counterexample: Optional[Market]


def _random_market(rng: random.Random, n: int, max_firms: int, max_sets: int) -> Market:
    universe = [c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    m = rng.randint(1, max_firms)
    firm_prefs = [rng.sample(universe, rng.randint(1, min(max_sets, len(universe)))) for _ in range(m)]
    worker_prefs = [rng.sample(range(m), rng.randint(0, m)) for _ in range(n)]
    return Market.build(n, [[set(s) for s in p] for p in firm_prefs], worker_prefs)


def probe_converse(
    target: DemandType,
    n: int,
    samples: int = 1000,
    seed: int = 0,
    max_firms: int = 3,
    max_sets: int = 4,
) -> ProbeResult:
    """Sample ``samples`` random markets on ``n`` workers and return the first
    one whose demand type is ``target`` and which has no stable matching."""
    rng = random.Random(seed)
    same = 0
    for i in range(samples):
        market = _random_market(rng, n, max_firms, max_sets)
        if market_demand_type(market) != target:
            continue
        same += 1
        if not enumerate_stable_matchings(market):
            return ProbeResult(i + 1, same, market)
    return ProbeResult(samples, same, None)
