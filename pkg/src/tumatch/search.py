"""Verification-gated search for a stable continuum matching.

Existence of a stable continuum matching is guaranteed by a fixed-point
argument that gives no algorithm, so this module only ever returns
candidates that pass the exact stability check.  Candidates come, in order,
from a user-supplied matching, from the discrete brute-force oracle, and
from a damped exact-rational tatonnement.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .continuum import (
    ONE,
    ZERO,
    PseudoMatching,
    available_weak,
    chosen,
    is_stable_pseudo,
)
from .errors import BudgetExceeded, MalformedInput, SearchExhausted
from .market import NULL, DEFAULT_ENUMERATION_BUDGET, Market, enumerate_stable_matchings, iter_matchings, is_individually_rational

log = logging.getLogger(__name__)

SOURCES = ("user", "oracle", "tatonnement")


@dataclass(frozen=True)
class SearchConfig:
    max_iterations: int = 400
    restarts: int = 8
    seed: int = 0
    sources: tuple[str, ...] = ("user", "oracle", "tatonnement")
    oracle_budget: int = DEFAULT_ENUMERATION_BUDGET
    snap_denominator: int = 12
    user_matching: Optional[PseudoMatching] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.max_iterations <= 0 or self.restarts <= 0:
            raise ValueError("max_iterations and restarts must be positive")
        unknown = set(self.sources) - set(SOURCES)
        if unknown:
            raise ValueError(f"unknown candidate sources: {sorted(unknown)}")


def verify_stable_continuum(market: Market, M: PseudoMatching) -> bool:
    """Stable in the continuum market and assigns unit mass to every worker."""
    if M.n != market.n_workers or len(M.firms) != market.m_firms:
        raise MalformedInput("continuum matching does not fit the market")
    return M.is_matching() and is_stable_pseudo(market, M)


def _proposal_step(market: Market, M: PseudoMatching) -> PseudoMatching:
    """Each firm demands its choice from the mass willing to join it; each
    worker type fills demands in its own preference order and parks the rest
    at the null firm; firms then drop whatever they would not choose."""
    n = market.n_workers
    demand = [chosen(market.firm_prefs[f], available_weak(market, M, f)) for f in market.firms]
    shares = [[ZERO] * n for _ in market.firms]
    null = [ZERO] * n
    for w in market.workers:
        left = ONE
        for f in market.worker_prefs[w].acceptable:
            give = min(demand[f][w], left)
            shares[f][w] = give
            left -= give
        null[w] = left
    for f in market.firms:
        kept = chosen(market.firm_prefs[f], shares[f])
        for w in market.workers:
            null[w] += shares[f][w] - kept[w]
        shares[f] = list(kept)
    return PseudoMatching(tuple(tuple(s) for s in shares), tuple(null))


def _mix(M: PseudoMatching, T: PseudoMatching, alpha: Fraction) -> PseudoMatching:
    def blend(a, b):
        return tuple(x + alpha * (y - x) for x, y in zip(a, b))

    return PseudoMatching(
        tuple(blend(a, b) for a, b in zip(M.firms, T.firms)), blend(M.null, T.null)
    )


def _repair(market: Market, M: PseudoMatching) -> PseudoMatching:
    """Make firms individually rational, returning dropped mass to the null firm."""
    null = list(M.null)
    firms = []
    for f in market.firms:
        kept = chosen(market.firm_prefs[f], M.firms[f])
        for w in market.workers:
            null[w] += M.firms[f][w] - kept[w]
        firms.append(kept)
    return PseudoMatching(tuple(firms), tuple(null))


def _key(M: PseudoMatching) -> tuple:
    return M.firms + (M.null,)


def _snap(market: Market, M: PseudoMatching, max_den: int) -> Optional[PseudoMatching]:
    """Round firm shares to nearby small-denominator fractions; the null firm
    absorbs the rest.  ``None`` if that overfills some worker type."""
    firms = []
    for f in market.firms:
        rounded = tuple(min(ONE, max(ZERO, v.limit_denominator(max_den))) for v in M.firms[f])
        firms.append(chosen(market.firm_prefs[f], rounded))
    null = []
    for w in market.workers:
        rest = ONE - sum((v[w] for v in firms), ZERO)
        if rest < 0:
            return None
        null.append(rest)
    return PseudoMatching(tuple(firms), tuple(null))


def tatonnement(market: Market, config: SearchConfig) -> Iterator[PseudoMatching]:
    """Candidates from damped proposal dynamics, in (restart, iteration) order.

    The step size starts at 1 and halves whenever a state repeats.  Damped
    iterates usually approach a fixed point without reaching it exactly, so
    each iterate is followed by its small-denominator rounding.
    """
    rng = random.Random(config.seed)
    start = PseudoMatching.from_dict(market, {NULL: (ONE,) * market.n_workers})
    for restart in range(config.restarts):
        if restart == 0:
            M = start
        else:
            candidates = [mu for mu in _sample_matchings(market, rng, 8)]
            M = PseudoMatching.from_discrete(market, rng.choice(candidates))
        alpha = ONE
        seen = {_key(M)}
        for _ in range(config.max_iterations):
            yield M
            snapped = _snap(market, M, config.snap_denominator)
            if snapped is not None and snapped != M:
                yield snapped
            T = _proposal_step(market, M)
            if T == M:
                break
            M = _repair(market, _mix(M, T, alpha))
            if _key(M) in seen:
                alpha /= 2
                seen = set()
            seen.add(_key(M))


def _sample_matchings(market: Market, rng: random.Random, k: int):
    out = []
    options = [NULL] + list(market.firms)
    from .market import DiscreteMatching

    for _ in range(k):
        mu = DiscreteMatching(tuple(rng.choice(options) for _ in market.workers))
        out.append(mu)
    return out


def find_stable_continuum(market: Market, config: SearchConfig = SearchConfig()) -> PseudoMatching:
    """First verified stable continuum matching from the configured sources.

    Raises :class:`SearchExhausted` when every source fails; that says
    nothing about existence.
    """
    if "user" in config.sources and config.user_matching is not None:
        if verify_stable_continuum(market, config.user_matching):
            return config.user_matching
        log.info("user-supplied matching is not stable")
    if "oracle" in config.sources:
        try:
            found = enumerate_stable_matchings(market, config.oracle_budget)
        except BudgetExceeded:
            found = []
            log.info("oracle budget exceeded; skipping discrete lift")
        for mu in found:
            M = PseudoMatching.from_discrete(market, mu)
            if verify_stable_continuum(market, M):
                return M
    if "tatonnement" in config.sources:
        for M in tatonnement(market, config):
            if verify_stable_continuum(market, M):
                return M
    raise SearchExhausted("no verified stable continuum matching within budget")
