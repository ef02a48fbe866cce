"""The divisible-worker market induced by a discrete market.

Every worker type has unit mass.  A firm "consumes" its acceptable sets in
preference order, each at unit speed, until its time budget of 1 runs out or
no acceptable set is available in what remains.  All quantities are
:class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import MalformedInput, PreconditionError
from .market import NULL, DiscreteMatching, FirmPreference, Market, members

Subpopulation = tuple  # tuple of Fraction, one entry per worker type

ZERO = Fraction(0)
ONE = Fraction(1)


def subpopulation(values: Sequence) -> Subpopulation:
    vec = tuple(Fraction(v) for v in values)
    for v in vec:
        if not ZERO <= v <= ONE:
            raise MalformedInput(f"subpopulation entry {v} outside [0, 1]")
    return vec


def zeros(n: int) -> Subpopulation:
    return (ZERO,) * n


def join(x: Sequence[Fraction], y: Sequence[Fraction]) -> Subpopulation:
    """Componentwise maximum."""
    return tuple(max(a, b) for a, b in zip(x, y))


def support(x: Sequence[Fraction]) -> tuple[int, ...]:
    """0/1 indicator of the positive entries."""
    return tuple(int(v > 0) for v in x)


def leq(x: Sequence, y: Sequence) -> bool:
    return all(a <= b for a, b in zip(x, y))


def max_distance(x: Sequence, y: Sequence) -> Fraction:
    return max((abs(a - b) for a, b in zip(x, y)), default=ZERO)


@dataclass(frozen=True)
class Step:
    k: int  # 0-based index into the firm's acceptable sets
    t: Fraction
    remaining: Subpopulation


@dataclass(frozen=True)
class ConsumptionTrace:
    steps: tuple[Step, ...]

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(s.t for s in self.steps)

    @property
    def total_time(self) -> Fraction:
        return sum(self.times, ZERO)

    def positive_indices(self) -> tuple[int, ...]:
        return tuple(s.k for s in self.steps if s.t > 0)


def choose_continuum(
    pref: Optional[FirmPreference], x: Sequence
) -> tuple[Subpopulation, ConsumptionTrace]:
    """Continuum choice of a firm from ``x`` together with its consumption
    trace.  ``pref=None`` stands for the null firm, which takes everything."""
    x = tuple(Fraction(v) for v in x)
    if pref is None:
        return x, ConsumptionTrace(())
    z = list(x)
    used = ZERO
    out = [ZERO] * len(x)
    steps = []
    for k, u in enumerate(pref.acceptable):
        idx = members(u)
        t = min([ONE - used] + [z[i] for i in idx])
        for i in idx:
            z[i] -= t
            out[i] += t
        used += t
        steps.append(Step(k, t, tuple(z)))
    return tuple(out), ConsumptionTrace(tuple(steps))


def chosen(pref: Optional[FirmPreference], x: Sequence) -> Subpopulation:
    return choose_continuum(pref, x)[0]


def blair_prefers(pref: FirmPreference, x_new: Sequence, x_old: Sequence, strict: bool = False) -> bool:
    """``x_new`` is weakly (or strictly) preferred to ``x_old`` in Blair's order."""
    x_new = tuple(Fraction(v) for v in x_new)
    x_old = tuple(Fraction(v) for v in x_old)
    weak = chosen(pref, join(x_new, x_old)) == x_new
    return weak and (not strict or x_new != x_old)


@dataclass(frozen=True)
class PseudoMatching:
    """Per-firm subpopulations (``firms[f]``) plus the null firm's share.

    Column sums are unconstrained; a pseudo-matching whose columns all sum to
    one is a continuum matching.
    """

    firms: tuple[Subpopulation, ...]
    null: Subpopulation

    def __post_init__(self) -> None:
        firms = tuple(subpopulation(v) for v in self.firms)
        null = subpopulation(self.null)
        n = len(null)
        if any(len(v) != n for v in firms):
            raise MalformedInput("subpopulations of a pseudo-matching differ in length")
        object.__setattr__(self, "firms", firms)
        object.__setattr__(self, "null", null)

    @classmethod
    def from_dict(cls, market: Market, shares: Mapping[int, Sequence]) -> "PseudoMatching":
        """Build from ``{firm: vector}``; missing firms get the zero vector."""
        n = market.n_workers
        for f in shares:
            if f != NULL and not 0 <= f < market.m_firms:
                raise MalformedInput(f"unknown firm {f}")
        firms = tuple(shares.get(f, zeros(n)) for f in market.firms)
        return cls(firms, shares.get(NULL, zeros(n)))

    @classmethod
    def from_discrete(cls, market: Market, matching: DiscreteMatching) -> "PseudoMatching":
        firms = tuple(tuple(Fraction(v) for v in matching.employees(f)) for f in market.firms)
        return cls(firms, tuple(Fraction(v) for v in matching.employees(NULL)))

    @property
    def n(self) -> int:
        return len(self.null)

    def share(self, f: int) -> Subpopulation:
        return self.null if f == NULL else self.firms[f]

    def replace(self, f: int, vec: Sequence) -> "PseudoMatching":
        vec = subpopulation(vec)
        if f == NULL:
            return PseudoMatching(self.firms, vec)
        firms = list(self.firms)
        firms[f] = vec
        return PseudoMatching(tuple(firms), self.null)

    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((v[w] for v in self.firms), ZERO) + self.null[w] for w in range(self.n)
        )

    def is_matching(self) -> bool:
        return all(s == ONE for s in self.column_sums())

    def is_integral(self) -> bool:
        return all(v in (ZERO, ONE) for vec in self.firms + (self.null,) for v in vec)

    def as_dict(self) -> dict:
        out = {f: v for f, v in enumerate(self.firms)}
        out[NULL] = self.null
        return out


def _available(market: Market, M: PseudoMatching, f: int, strict: bool) -> Subpopulation:
    out = []
    for w in market.workers:
        wp = market.worker_prefs[w]
        total = ZERO
        for g in list(market.firms) + [NULL]:
            better = wp.rank(f) < wp.rank(g)
            if better or (not strict and g == f):
                total += M.share(g)[w]
        out.append(total)
    return tuple(out)


def available_weak(market: Market, M: PseudoMatching, f: int) -> Subpopulation:
    """Mass of each worker type held by ``f`` or by firms the worker likes less."""
    return _available(market, M, f, strict=False)


def available_strict(market: Market, M: PseudoMatching, f: int) -> Subpopulation:
    """Mass of each worker type held by firms the worker likes less than ``f``."""
    return _available(market, M, f, strict=True)


@dataclass(frozen=True)
class BlockWitness:
    firm: int
    k: int  # first 0-based acceptable-set index where the firm would consume differently
    subset: tuple[int, ...]
    improvement: Subpopulation  # a subpopulation the firm strictly prefers and can recruit


def firm_can_block(market: Market, M: PseudoMatching, f: int) -> Optional[BlockWitness]:
    """Whether ``f`` has a blocking coalition in ``M``, with a witness.

    Everything ``f`` could recruit is ``A = min(available_weak, 1)``.  By
    revealed preference ``f`` can block exactly when ``ch(A) != M_f``, and
    then ``ch(A)`` itself is strictly preferred to ``M_f`` and fits in ``A``.
    Requiring the grown set to lie in the support of mass held by worse
    firms alone is sufficient but not necessary: the firm may also shift
    time toward a better set using workers it already holds.
    """
    pref = market.firm_prefs[f]
    own = M.share(f)
    out, trace = choose_continuum(pref, own)
    if out != own:
        raise PreconditionError(f"firm {f} is not individually rational in M")
    reach = tuple(min(ONE, a) for a in available_weak(market, M, f))
    best, best_trace = choose_continuum(pref, reach)
    if best == own:
        return None
    k = next(a.k for a, b in zip(trace.steps, best_trace.steps) if a.t != b.t)
    return BlockWitness(f, k, pref.acceptable[k], best)


def support_condition_blocks(market: Market, M: PseudoMatching, f: int) -> Optional[int]:
    """Smallest ``k`` with time left after consuming ``u^k`` and ``u^k``
    inside the support of the mass held at firms the workers like less.

    Any such ``k`` gives a blocking coalition, but blocking can happen
    without one; :func:`firm_can_block` is the exact test.
    """
    pref = market.firm_prefs[f]
    _, trace = choose_continuum(pref, M.share(f))
    willing = support(available_strict(market, M, f))
    used = ZERO
    for step in trace.steps:
        used += step.t
        if used < ONE and leq(pref.acceptable[step.k], willing):
            return step.k
    return None


def individually_rational_pseudo(market: Market, M: PseudoMatching) -> bool:
    if M.n != market.n_workers or len(M.firms) != market.m_firms:
        raise MalformedInput("pseudo-matching does not fit the market")
    for f in market.firms:
        share = M.firms[f]
        if chosen(market.firm_prefs[f], share) != share:
            return False
        for w in market.workers:
            if share[w] > 0 and not market.worker_prefs[w].accepts(f):
                return False
    return True


def is_stable_pseudo(market: Market, M: PseudoMatching) -> bool:
    if not individually_rational_pseudo(market, M):
        return False
    return all(firm_can_block(market, M, f) is None for f in market.firms)


def _require_stable(market: Market, M: PseudoMatching) -> None:
    if not is_stable_pseudo(market, M):
        raise PreconditionError("transformation requires a stable pseudo-matching")


def transform_type1(market: Market, M: PseudoMatching, f: int) -> PseudoMatching:
    """Drop everything held by a firm that has consumption time left over."""
    _require_stable(market, M)
    _, trace = choose_continuum(market.firm_prefs[f], M.firms[f])
    if trace.total_time >= ONE:
        raise PreconditionError(f"firm {f} uses its whole time budget")
    return M.replace(f, zeros(M.n))


def transform_type2(market: Market, M: PseudoMatching, f: int, k: int) -> PseudoMatching:
    """Snap a firm to one acceptable set it consumes for positive time.

    ``k`` is the 0-based index into the firm's preference list.
    """
    _require_stable(market, M)
    pref = market.firm_prefs[f]
    _, trace = choose_continuum(pref, M.firms[f])
    if not 0 <= k < len(pref) or trace.steps[k].t <= 0:
        raise PreconditionError(f"firm {f} spends no time on acceptable set {k}")
    return M.replace(f, pref.acceptable[k])


def transform_type3(market: Market, M: PseudoMatching, w: int, bit: int) -> PseudoMatching:
    """Set a strictly fractional unmatched mass to 0 or 1."""
    _require_stable(market, M)
    if bit not in (0, 1):
        raise PreconditionError("bit must be 0 or 1")
    if not ZERO < M.null[w] < ONE:
        raise PreconditionError(f"unmatched mass of worker {w} is not strictly fractional")
    null = list(M.null)
    null[w] = Fraction(bit)
    return M.replace(NULL, null)


def lift_to_discrete(M: PseudoMatching) -> DiscreteMatching:
    """Discrete matching of an integral continuum matching."""
    if not M.is_integral():
        raise MalformedInput("continuum matching is not integral")
    if not M.is_matching():
        raise MalformedInput("pseudo-matching does not assign unit mass to every worker")
    assignment = []
    for w in range(M.n):
        holders = [f for f, vec in enumerate(M.firms) if vec[w] == ONE]
        assignment.append(holders[0] if holders else NULL)
    return DiscreteMatching(tuple(assignment))
