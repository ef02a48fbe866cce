"""From a stable continuum matching to a stable discrete matching.

The consumption traces of a stable continuum matching give a nonnegative
solution of ``B z = 1``: one block of columns per firm (its acceptable sets
consumed for positive time, plus an all-zero column when time is left over)
and one unit column per worker type the null firm holds.  The first ``m``
rows force each firm to pick exactly one of its columns, the last ``n``
rows force unit mass per worker.  An integral vertex of that polytope is a
stable integral matching.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .continuum import ONE, ZERO, PseudoMatching, choose_continuum, lift_to_discrete
from .demand import DEFAULT_SUBMATRIX_BUDGET, DemandType, Verdict, is_totally_unimodular, market_demand_type
from .errors import InternalError, MalformedInput, PreconditionError, SearchExhausted
from .market import (
    NULL,
    DiscreteMatching,
    Market,
    enumerate_stable_matchings,
    is_stable,
)
from .search import SearchConfig, find_stable_continuum, verify_stable_continuum
from .simplex import feasible_vertex

log = logging.getLogger(__name__)

SET, ZERO_COLUMN, UNMATCHED = "set", "zero", "null"


@dataclass(frozen=True)
class ColumnMeta:
    owner: int  # firm index or NULL
    kind: str  # SET, ZERO_COLUMN or UNMATCHED
    index: int = -1  # acceptable-set index for SET, worker for UNMATCHED

    def label(self, market: Market) -> str:
        if self.kind == SET:
            return f"{market.firm_name(self.owner)}:u{self.index + 1}"
        if self.kind == ZERO_COLUMN:
            return f"{market.firm_name(self.owner)}:0"
        return f"null:{market.worker_names[self.index]}"


@dataclass(frozen=True)
class ConstraintSystem:
    m: int
    n: int
    b: list  # (m + n) x K integer rows
    meta: tuple[ColumnMeta, ...]
    z_hat: tuple[Fraction, ...]

    @property
    def k(self) -> int:
        return len(self.meta)

    def worker_part(self, j: int) -> tuple[int, ...]:
        return tuple(self.b[self.m + w][j] for w in range(self.n))

    def firm_rows(self) -> list:
        return self.b[: self.m]

    def worker_rows(self) -> list:
        return self.b[self.m:]

    def residual(self, z: Sequence) -> list:
        return [sum((row[j] * z[j] for j in range(self.k)), Fraction(0)) - 1 for row in self.b]


def build_system(market: Market, M: PseudoMatching, check: bool = True) -> ConstraintSystem:
    """Assemble ``B`` and the seeding solution ``z_hat`` from a stable matching.

    Columns run firm by firm (acceptable sets by ascending index, then the
    optional zero column) and end with the null firm's unit columns by worker.
    """
    if check and not verify_stable_continuum(market, M):
        raise PreconditionError("seeding matching is not a stable continuum matching")
    m, n = market.m_firms, market.n_workers
    columns: list[list[int]] = []
    meta: list[ColumnMeta] = []
    z_hat: list[Fraction] = []
    for f in market.firms:
        pref = market.firm_prefs[f]
        _, trace = choose_continuum(pref, M.firms[f])
        head = [int(i == f) for i in range(m)]
        for step in trace.steps:
            if step.t > 0:
                columns.append(head + list(pref.acceptable[step.k]))
                meta.append(ColumnMeta(f, SET, step.k))
                z_hat.append(step.t)
        if trace.total_time < ONE:
            columns.append(head + [0] * n)
            meta.append(ColumnMeta(f, ZERO_COLUMN))
            z_hat.append(ONE - trace.total_time)
    for w in market.workers:
        if M.null[w] > 0:
            columns.append([0] * m + [int(i == w) for i in range(n)])
            meta.append(ColumnMeta(NULL, UNMATCHED, w))
            z_hat.append(M.null[w])
    b = [[col[r] for col in columns] for r in range(m + n)]
    system = ConstraintSystem(m, n, b, tuple(meta), tuple(z_hat))
    if any(system.residual(z_hat)):
        raise InternalError("seeding solution does not satisfy B z = 1")
    return system


def is_integral(z: Sequence[Fraction]) -> bool:
    return all(v.denominator == 1 for v in z)


@dataclass(frozen=True)
class Vertex:
    z: tuple[Fraction, ...]

    @property
    def integral(self) -> bool:
        return is_integral(self.z)


def find_integral_vertex(system: ConstraintSystem) -> Vertex:
    """A vertex of ``{z : B z = 1, z >= 0}`` by exact Phase-I simplex.

    When ``B`` is unimodular every vertex is a 0/1 vector.  Otherwise the
    returned vertex may be fractional; check :attr:`Vertex.integral`.
    """
    z = feasible_vertex(system.b, [1] * len(system.b))
    vertex = Vertex(tuple(z))
    if not vertex.integral:
        log.info("vertex %s is not integral; B is not unimodular", [str(v) for v in z])
    return vertex


def vertex_to_matching(system: ConstraintSystem, z: Sequence) -> PseudoMatching:
    """Continuum matching ``M'_f = sum_j z_j B*_j`` over the columns of each firm."""
    z = tuple(Fraction(v) for v in z)
    if len(z) != system.k:
        raise MalformedInput("z has the wrong length")
    if not is_integral(z):
        raise MalformedInput("z is not integral")
    if any(v < 0 for v in z) or any(system.residual(z)):
        raise MalformedInput("z does not satisfy B z = 1, z >= 0")
    firms = [[ZERO] * system.n for _ in range(system.m)]
    null = [ZERO] * system.n
    for j, meta in enumerate(system.meta):
        if z[j] == 0:
            continue
        part = system.worker_part(j)
        target = null if meta.owner == NULL else firms[meta.owner]
        for w in range(system.n):
            target[w] += z[j] * part[w]
    return PseudoMatching(tuple(tuple(v) for v in firms), tuple(null))


STABLE = "stable"
NOT_TU = "not-tu"
EXHAUSTED = "search-exhausted"
NON_INTEGRAL = "non-integral"


@dataclass
class SolveResult:
    status: str
    demand_type: DemandType
    tu: Verdict
    matching: Optional[DiscreteMatching] = None
    seed: Optional[PseudoMatching] = None
    system: Optional[ConstraintSystem] = None
    vertex: Optional[Vertex] = None
    integral_matching: Optional[PseudoMatching] = None
    oracle: Optional[list] = field(default=None)

    @property
    def ok(self) -> bool:
        return self.status == STABLE


def solve(
    market: Market,
    config: SearchConfig = SearchConfig(),
    force: bool = False,
    oracle_check: bool = False,
    tu_budget: int = DEFAULT_SUBMATRIX_BUDGET,
) -> SolveResult:
    """Demand type, TU test, stable continuum seed, ``B z = 1``, integral
    vertex, and back to a discrete matching that is re-verified at the end."""
    dt = market_demand_type(market)
    verdict = is_totally_unimodular(dt.matrix(), budget=tu_budget)
    result = SolveResult(NOT_TU, dt, verdict)
    if not verdict and not force:
        return result
    try:
        seed = find_stable_continuum(market, config)
    except SearchExhausted:
        result.status = EXHAUSTED
        return result
    result.seed = seed
    system = build_system(market, seed)
    result.system = system
    vertex = find_integral_vertex(system)
    result.vertex = vertex
    if not vertex.integral:
        if verdict:
            raise InternalError("TU demand type produced a fractional vertex")
        result.status = NON_INTEGRAL
        return result
    integral = vertex_to_matching(system, vertex.z)
    result.integral_matching = integral
    if not verify_stable_continuum(market, integral):
        raise InternalError("integral vertex does not give a stable continuum matching")
    mu = lift_to_discrete(integral)
    if not is_stable(market, mu):
        raise InternalError("pipeline produced an unstable discrete matching")
    result.matching = mu
    result.status = STABLE
    if oracle_check:
        result.oracle = enumerate_stable_matchings(market, config.oracle_budget)
        if mu not in result.oracle:
            raise InternalError("solution missing from the brute-force stable set")
    return result
