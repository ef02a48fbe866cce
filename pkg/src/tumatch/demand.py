"""Demand types of firms and (total) unimodularity of integer matrices.

A firm's demand type collects every nonzero change ``ind(Ch(S)) - ind(Ch(S'))``
of its chosen set as availability grows from ``S'`` to ``S``.  Matrices are
plain lists of integer rows; all determinants use exact integer arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, InternalError, MalformedInput
from .market import FirmPreference, Market, choice_table

DEFAULT_MAX_BRUTEFORCE_N = 16
DEFAULT_MAX_ORDER = 12
DEFAULT_SUBMATRIX_BUDGET = 2**24

IntMatrix = list  # list of equal-length lists of int


@dataclass(frozen=True)
class DemandType:
    """Deduplicated demand vectors in descending lexicographic order."""

    vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]]) -> "DemandType":
        vs = {tuple(int(x) for x in v) for v in vectors}
        if any(not any(v) for v in vs):
            raise MalformedInput("zero vector in a demand type")
        return cls(tuple(sorted(vs, reverse=True)))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, v: object) -> bool:
        return tuple(v) in self.vectors  # type: ignore[arg-type]

    def as_set(self) -> frozenset:
        return frozenset(self.vectors)

    def union(self, other: "DemandType") -> "DemandType":
        return DemandType.of(self.vectors + other.vectors)

    def matrix(self) -> IntMatrix:
        """Vectors as the columns of a matrix (``[]`` when empty)."""
        if not self.vectors:
            return []
        n = len(self.vectors[0])
        return [[v[i] for v in self.vectors] for i in range(n)]


def _diff(a: int, b: int, n: int) -> tuple[int, ...]:
    return tuple(((a >> i) & 1) - ((b >> i) & 1) for i in range(n))


def demand_type_bruteforce(
    pref: FirmPreference, n: int, max_n: int = DEFAULT_MAX_BRUTEFORCE_N
) -> DemandType:
    """Demand type straight from the definition, over all nested ``S' < S``."""
    if n > max_n:
        raise BudgetExceeded(f"brute-force demand type needs 2^{n} sets (cap n <= {max_n})")
    table = choice_table(pref, n)
    pairs = set()
    for s in range(1 << n):
        cs = table[s]
        sub = (s - 1) & s
        while True:
            if sub != s:
                cb = table[sub]
                if cb != cs:
                    pairs.add((cs, cb))
            if sub == 0:
                break
            sub = (sub - 1) & s
    return DemandType.of(_diff(a, b, n) for a, b in pairs)


def demand_type_fast(pref: FirmPreference, n: int) -> DemandType:
    """Demand type from pairs of acceptable sets, O(N^3) in the list length.

    ``S - S'`` belongs to the demand type exactly when ``S'`` is its own
    choice, ``S`` is ranked above ``S'`` and ``S`` is chosen from ``S | S'``.
    ``S' = {}`` is included explicitly.
    """
    own = [m for m in pref.masks if pref.choose_mask(m) == m]
    vectors = [_diff(a, 0, n) for a in own]
    for i, a in enumerate(own):
        for b in own[i + 1:]:
            if pref.choose_mask(a | b) == a:
                vectors.append(_diff(a, b, n))
    return DemandType.of(vectors)


def firm_demand_types(market: Market) -> list[DemandType]:
    return [demand_type_fast(p, market.n_workers) for p in market.firm_prefs]


def market_demand_type(market: Market) -> DemandType:
    out = DemandType(())
    for dt in firm_demand_types(market):
        out = out.union(dt)
    return out


# --- determinants -----------------------------------------------------------

def det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    k = len(a)
    if k == 0:
        return 1
    if any(len(row) != k for row in a):
        raise ValueError("det needs a square matrix")
    sign = 1
    prev = 1
    for i in range(k - 1):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1]


def submatrix(matrix: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
    return [[matrix[r][c] for c in cols] for r in rows]


def rank(matrix: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class Witness:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    det: int


@dataclass(frozen=True)
class Verdict:
    """Outcome of a (total) unimodularity test; truthy when the test passed."""

    ok: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok


def _shape(matrix: Sequence[Sequence[int]]) -> tuple[int, int]:
    if not matrix:
        return 0, 0
    return len(matrix), len(matrix[0])


def _representatives(vectors: list[tuple[int, ...]]) -> list[int]:
    """Indices of the first nonzero vector of each class up to sign."""
    seen = set()
    keep = []
    for i, v in enumerate(vectors):
        if not any(v):
            continue
        neg = tuple(-x for x in v)
        if v in seen or neg in seen:
            continue
        seen.add(v)
        keep.append(i)
    return keep


def is_totally_unimodular(
    matrix: Sequence[Sequence[int]],
    max_order: int = DEFAULT_MAX_ORDER,
    budget: int = DEFAULT_SUBMATRIX_BUDGET,
) -> Verdict:
    """Exhaustive test that every square submatrix has determinant 0 or +-1.

    Zero rows/columns and rows/columns repeated up to sign cannot change the
    answer and are dropped first.  Submatrices are scanned by increasing
    order, so the returned witness is a smallest violator.
    """
    nrows, ncols = _shape(matrix)
    for r in range(nrows):
        for c in range(ncols):
            if abs(matrix[r][c]) >= 2:
                return Verdict(False, Witness((r,), (c,), int(matrix[r][c])))
    if nrows == 0 or ncols == 0:
        return Verdict(True)
    cols = _representatives([tuple(matrix[r][c] for r in range(nrows)) for c in range(ncols)])
    rows = _representatives([tuple(matrix[r][c] for c in cols) for r in range(nrows)])
    order = min(len(rows), len(cols))
    if order > max_order:
        raise BudgetExceeded(f"TU test needs submatrices up to order {order} (cap {max_order})")
    total = sum(math.comb(len(rows), k) * math.comb(len(cols), k) for k in range(1, order + 1))
    if total > budget:
        raise BudgetExceeded(f"TU test needs {total} determinants (budget {budget})")
    # 1x1 and 2x2 are covered by the entry check and a cheap closed form
    for k in range(2, order + 1):
        for rs in itertools.combinations(rows, k):
            for cs in itertools.combinations(cols, k):
                if k == 2:
                    d = (matrix[rs[0]][cs[0]] * matrix[rs[1]][cs[1]]
                         - matrix[rs[0]][cs[1]] * matrix[rs[1]][cs[0]])
                else:
                    d = det(submatrix(matrix, rs, cs))
                if d not in (-1, 0, 1):
                    return Verdict(False, Witness(rs, cs, d))
    return Verdict(True)


def _full_row_rank_test(matrix: Sequence[Sequence[int]], max_order: int, budget: int) -> Verdict:
    nrows, ncols = _shape(matrix)
    if nrows > max_order:
        raise BudgetExceeded(f"unimodularity test needs order-{nrows} bases (cap {max_order})")
    if math.comb(ncols, nrows) > budget:
        raise BudgetExceeded(f"unimodularity test needs {math.comb(ncols, nrows)} determinants")
    all_rows = tuple(range(nrows))
    for cs in itertools.combinations(range(ncols), nrows):
        d = det(submatrix(matrix, all_rows, cs))
        if d not in (-1, 0, 1):
            return Verdict(False, Witness(all_rows, cs, d))
    return Verdict(True)


def integer_kernel(matrix: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Lattice basis (as columns, ``n x k``) of ``{x in Z^n : matrix @ x = 0}``.

    Integer column operations reduce ``matrix`` to echelon form while the
    same operations are applied to the identity; columns of the transform
    beyond the pivots span the kernel lattice.
    """
    a = [list(map(int, row)) for row in matrix]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop_swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def colop_sub(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    pivot = 0
    for r in range(len(a)):
        if pivot >= n:
            break
        while True:
            nz = [c for c in range(pivot, n) if a[r][c] != 0]
            if not nz:
                break
            c_min = min(nz, key=lambda c: abs(a[r][c]))
            if c_min != pivot:
                colop_swap(c_min, pivot)
            done = True
            for c in range(pivot + 1, n):
                if a[r][c] != 0:
                    colop_sub(c, pivot, a[r][c] // a[r][pivot])
                    if a[r][c] != 0:
                        done = False
            if done:
                pivot += 1
                break
    return [[u[i][j] for j in range(pivot, n)] for i in range(n)]


def _left_nullspace(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer vectors spanning ``{y : y^T matrix = 0}`` over the rationals."""
    nrows, ncols = _shape(matrix)
    # row-reduce the transpose, read off a basis of its nullspace
    t = [[Fraction(matrix[r][c]) for r in range(nrows)] for c in range(ncols)]
    pivots = []
    row = 0
    for c in range(nrows):
        piv = next((i for i in range(row, len(t)) if t[i][c] != 0), None)
        if piv is None:
            continue
        t[row], t[piv] = t[piv], t[row]
        p = t[row][c]
        t[row] = [x / p for x in t[row]]
        for i in range(len(t)):
            if i != row and t[i][c] != 0:
                f = t[i][c]
                t[i] = [x - f * y for x, y in zip(t[i], t[row])]
        pivots.append(c)
        row += 1
    basis = []
    for free in (c for c in range(nrows) if c not in pivots):
        y = [Fraction(0)] * nrows
        y[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            y[pc] = -t[i][free]
        scale = math.lcm(*(v.denominator for v in y))
        basis.append([int(v * scale) for v in y])
    return basis


def _solve_full_column_rank(q: list[list[int]], b: Sequence[int]) -> list[Fraction]:
    """Exact ``x`` with ``q x = b`` for ``q`` of full column rank."""
    n = len(q)
    k = len(q[0]) if q else 0
    aug = [[Fraction(v) for v in q[i]] + [Fraction(b[i])] for i in range(n)]
    row = 0
    pivcols = []
    for c in range(k):
        piv = next((i for i in range(row, n) if aug[i][c] != 0), None)
        if piv is None:
            raise InternalError("lattice basis is not of full column rank")
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][c]
        aug[row] = [x / p for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivcols.append(c)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, n)):
        raise InternalError("column does not lie in the lattice span")
    return [aug[i][k] for i in range(k)]


def lattice_coordinates(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Coordinates of the columns of ``matrix`` in a basis of the saturated
    lattice ``span(columns) ∩ Z^n``; the result has full row rank."""
    nrows, ncols = _shape(matrix)
    y = _left_nullspace(matrix)
    q = integer_kernel(y, nrows) if y else [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    coords = []
    for c in range(ncols):
        x = _solve_full_column_rank(q, [matrix[r][c] for r in range(nrows)])
        if any(v.denominator != 1 for v in x):
            raise InternalError("non-integral lattice coordinates")
        coords.append([int(v) for v in x])
    k = len(q[0]) if q else 0
    return [[coords[c][i] for c in range(ncols)] for i in range(k)]


def is_unimodular(
    matrix: Sequence[Sequence[int]],
    max_order: int = DEFAULT_MAX_ORDER,
    budget: int = DEFAULT_SUBMATRIX_BUDGET,
) -> Verdict:
    """Whether every linearly independent set of columns extends to an
    integral basis of determinant +-1.

    Full row rank: every maximal column submatrix must have determinant in
    {0, +-1}.  Otherwise the columns are rewritten in coordinates of the
    saturated lattice they span and the same test is applied; a witness then
    refers to columns only (its ``rows`` are lattice coordinates).
    """
    nrows, ncols = _shape(matrix)
    if nrows == 0 or ncols == 0:
        return Verdict(True)
    r = rank(matrix)
    if r == 0:
        return Verdict(True)
    if r == nrows:
        return _full_row_rank_test(matrix, max_order, budget)
    return _full_row_rank_test(lattice_coordinates(matrix), max_order, budget)
