"""Discrete many-to-one matching markets.

Workers and firms are dense integer indices.  The null firm is ``NULL``
(``-1``).  A set of workers is a 0/1 indicator tuple of length ``n``; the
helpers :func:`indicator` and :func:`members` convert to and from index
collections.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, MalformedInput

NULL = -1
DEFAULT_ENUMERATION_BUDGET = 2**20

Subset = tuple  # tuple of 0/1 ints


def indicator(workers: Iterable[int], n: int) -> Subset:
    """Indicator tuple of a collection of worker indices."""
    vec = [0] * n
    for w in workers:
        if not 0 <= w < n:
            raise MalformedInput(f"worker index {w} out of range for n={n}")
        vec[w] = 1
    return tuple(vec)


def members(vec: Sequence[int]) -> tuple[int, ...]:
    """Indices of the nonzero entries of an indicator (or any) vector."""
    return tuple(i for i, v in enumerate(vec) if v)


def to_mask(vec: Sequence[int]) -> int:
    mask = 0
    for i, v in enumerate(vec):
        if v:
            mask |= 1 << i
    return mask


def from_mask(mask: int, n: int) -> Subset:
    return tuple((mask >> i) & 1 for i in range(n))


@dataclass(frozen=True)
class FirmPreference:
    """Acceptable worker sets of one firm, best first.

    The empty set is implicitly ranked just after the last listed set; any
    set not listed is unacceptable.
    """

    acceptable: tuple[Subset, ...]
    _masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        sets = tuple(tuple(int(v) for v in s) for s in self.acceptable)
        lengths = {len(s) for s in sets}
        if len(lengths) > 1:
            raise MalformedInput("acceptable sets have inconsistent lengths")
        for s in sets:
            if any(v not in (0, 1) for v in s):
                raise MalformedInput(f"acceptable set {s} is not a 0/1 vector")
            if not any(s):
                raise MalformedInput("the empty set may not be listed as acceptable")
        if len(set(sets)) != len(sets):
            raise MalformedInput("duplicate acceptable set in firm preference")
        object.__setattr__(self, "acceptable", sets)
        object.__setattr__(self, "_masks", tuple(to_mask(s) for s in sets))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int) -> "FirmPreference":
        return cls(tuple(indicator(s, n) for s in sets))

    def __len__(self) -> int:
        return len(self.acceptable)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def rank(self, subset: Sequence[int]) -> Optional[int]:
        """Position of ``subset`` in the list, ``len(self)`` for the empty set,
        ``None`` if unacceptable."""
        mask = to_mask(subset)
        if mask == 0:
            return len(self._masks)
        try:
            return self._masks.index(mask)
        except ValueError:
            return None

    def choose_mask(self, avail: int) -> int:
        for m in self._masks:
            if m & ~avail == 0:
                return m
        return 0


@dataclass(frozen=True)
class WorkerPreference:
    """Acceptable firms of one worker, best first.

    Unlisted firms rank below the null firm, among themselves by index, which
    makes the order strict and complete over all firms.
    """

    acceptable: tuple[int, ...]

    def __post_init__(self) -> None:
        firms = tuple(int(f) for f in self.acceptable)
        if NULL in firms or any(f < 0 for f in firms):
            raise MalformedInput("the null firm may not be listed in a worker preference")
        if len(set(firms)) != len(firms):
            raise MalformedInput("duplicate firm in worker preference")
        object.__setattr__(self, "acceptable", firms)

    def rank(self, f: int) -> int:
        if f == NULL:
            return len(self.acceptable)
        try:
            return self.acceptable.index(f)
        except ValueError:
            return len(self.acceptable) + 1 + f

    def accepts(self, f: int) -> bool:
        return f in self.acceptable

    def weakly_prefers(self, f: int, g: int) -> bool:
        """``f`` is at least as good as ``g``."""
        return f == g or self.rank(f) < self.rank(g)


@dataclass(frozen=True)
class Market:
    n_workers: int
    m_firms: int
    firm_prefs: tuple[FirmPreference, ...]
    worker_prefs: tuple[WorkerPreference, ...]
    worker_names: tuple[str, ...] = ()
    firm_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.firm_prefs) != self.m_firms:
            raise MalformedInput("need one firm preference per firm")
        if len(self.worker_prefs) != self.n_workers:
            raise MalformedInput("need one worker preference per worker")
        for pref in self.firm_prefs:
            for s in pref.acceptable:
                if len(s) != self.n_workers:
                    raise MalformedInput("acceptable set length differs from n_workers")
        for wp in self.worker_prefs:
            for f in wp.acceptable:
                if f >= self.m_firms:
                    raise MalformedInput(f"worker preference names unknown firm {f}")
        if not self.worker_names:
            object.__setattr__(
                self, "worker_names", tuple(f"w{i + 1}" for i in range(self.n_workers))
            )
        if not self.firm_names:
            object.__setattr__(
                self, "firm_names", tuple(f"f{i + 1}" for i in range(self.m_firms))
            )
        if len(self.worker_names) != self.n_workers or len(self.firm_names) != self.m_firms:
            raise MalformedInput("name lists do not match market size")

    @classmethod
    def build(
        cls,
        n: int,
        firm_prefs: Sequence[Sequence[Iterable[int]]],
        worker_prefs: Sequence[Sequence[int]],
    ) -> "Market":
        """Build from 0-based index lists: ``firm_prefs[f]`` is a list of
        worker-index collections, ``worker_prefs[w]`` a list of firm indices."""
        return cls(
            n_workers=n,
            m_firms=len(firm_prefs),
            firm_prefs=tuple(FirmPreference.from_sets(p, n) for p in firm_prefs),
            worker_prefs=tuple(WorkerPreference(tuple(p)) for p in worker_prefs),
        )

    @property
    def workers(self) -> range:
        return range(self.n_workers)

    @property
    def firms(self) -> range:
        return range(self.m_firms)

    def firm_name(self, f: int) -> str:
        return "null" if f == NULL else self.firm_names[f]


@dataclass(frozen=True)
class DiscreteMatching:
    """``assignment[w]`` is the firm of worker ``w`` (``NULL`` if unmatched)."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(int(f) for f in self.assignment))

    @classmethod
    def from_firm_sets(cls, n: int, sets: dict[int, Iterable[int]]) -> "DiscreteMatching":
        assignment = [NULL] * n
        for f, ws in sets.items():
            for w in ws:
                if assignment[w] != NULL:
                    raise MalformedInput(f"worker {w} assigned twice")
                assignment[w] = f
        return cls(tuple(assignment))

    @classmethod
    def unmatched(cls, n: int) -> "DiscreteMatching":
        return cls((NULL,) * n)

    def employees(self, f: int) -> Subset:
        return tuple(int(g == f) for g in self.assignment)

    def employees_mask(self, f: int) -> int:
        mask = 0
        for w, g in enumerate(self.assignment):
            if g == f:
                mask |= 1 << w
        return mask

    def check(self, market: Market) -> None:
        if len(self.assignment) != market.n_workers:
            raise MalformedInput("matching length differs from n_workers")
        for f in self.assignment:
            if f != NULL and not 0 <= f < market.m_firms:
                raise MalformedInput(f"matching names unknown firm {f}")


def choose(pref: FirmPreference, avail: Sequence[int]) -> Subset:
    """Most preferred acceptable subset of ``avail`` (empty if none)."""
    return from_mask(pref.choose_mask(to_mask(avail)), len(avail))


def is_individually_rational(market: Market, matching: DiscreteMatching) -> bool:
    matching.check(market)
    for w, f in enumerate(matching.assignment):
        if f != NULL and not market.worker_prefs[w].accepts(f):
            return False
    for f in market.firms:
        held = matching.employees_mask(f)
        if market.firm_prefs[f].choose_mask(held) != held:
            return False
    return True


def _willing_mask(market: Market, matching: DiscreteMatching, f: int) -> int:
    mask = 0
    for w, g in enumerate(matching.assignment):
        if market.worker_prefs[w].weakly_prefers(f, g):
            mask |= 1 << w
    return mask


def find_blocking_coalition(
    market: Market, matching: DiscreteMatching
) -> Optional[tuple[int, Subset]]:
    """First ``(firm, workers)`` pair that blocks ``matching``, or ``None``.

    Firms are scanned by index and each firm's acceptable sets in preference
    order; only sets strictly better than the firm's current set qualify.
    """
    matching.check(market)
    n = market.n_workers
    for f in market.firms:
        pref = market.firm_prefs[f]
        held = matching.employees_mask(f)
        willing = _willing_mask(market, matching, f)
        for m in pref.masks:
            if m == held:
                break
            if m & ~willing == 0:
                return f, from_mask(m, n)
        else:
            # held set is unacceptable: even the empty set is preferred
            if held != 0:
                return f, from_mask(0, n)
    return None


def is_stable(market: Market, matching: DiscreteMatching) -> bool:
    return (
        is_individually_rational(market, matching)
        and find_blocking_coalition(market, matching) is None
    )


def iter_matchings(market: Market) -> Iterator[DiscreteMatching]:
    options = (NULL,) + tuple(market.firms)
    for assignment in itertools.product(options, repeat=market.n_workers):
        yield DiscreteMatching(assignment)


def enumerate_stable_matchings(
    market: Market, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> list[DiscreteMatching]:
    """All stable matchings by exhaustive search, in lexicographic order of
    assignment (null firm first)."""
    size = (market.m_firms + 1) ** market.n_workers
    if size > budget:
        raise BudgetExceeded(
            f"(m+1)^n = {size} assignments exceeds the enumeration budget {budget}"
        )
    return [mu for mu in iter_matchings(market) if is_stable(market, mu)]


def choice_table(pref: FirmPreference, n: int) -> list[int]:
    """``table[S]`` is the chosen mask for every availability mask ``S``."""
    return [pref.choose_mask(s) for s in range(1 << n)]


def is_substitutable(pref: FirmPreference, n: int) -> bool:
    table = choice_table(pref, n)
    for s in range(1 << n):
        chosen = table[s]
        for w in range(n):
            if not (chosen >> w) & 1:
                continue
            for w2 in range(n):
                if w2 == w or not (s >> w2) & 1:
                    continue
                if not (table[s & ~(1 << w2)] >> w) & 1:
                    return False
    return True
