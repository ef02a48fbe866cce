"""Exact-rational Phase-I simplex for finding a vertex of ``{z : Az = b, z >= 0}``."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import InternalError


class Infeasible(Exception):
    pass


def feasible_vertex(a: Sequence[Sequence[int]], b: Sequence, max_pivots: int = 100_000) -> list[Fraction]:
    """A basic feasible solution of ``a z = b, z >= 0``.

    Artificial variables start as the basis; Bland's rule (lowest-index
    entering and leaving variables) guarantees termination.  Artificials
    left in the basis at level zero are pivoted out where possible, so the
    support of the answer is a set of linearly independent columns of ``a``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    rhs = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row + [Fraction(int(j == i)) for j in range(m)])
        rhs.append(bi)
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of the phase-I objective (sum of artificials)
    cost = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            cost[j] -= rows[i][j]

    def pivot(r: int, c: int) -> None:
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        rhs[r] = rhs[r] / p
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                rhs[i] -= f * rhs[r]
        if cost[c] != 0:
            f = cost[c]
            for j in range(width):
                cost[j] -= f * rows[r][j]
        basis[r] = c

    for _ in range(max_pivots):
        entering: Optional[int] = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            if rows[i][entering] > 0:
                ratio = rhs[i] / rows[i][entering]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise InternalError("phase-I problem reported unbounded")
        pivot(best[1], entering)
    else:
        raise InternalError("simplex pivot limit reached")

    if any(rhs[i] != 0 for i in range(m) if basis[i] >= n):
        raise Infeasible("system has no nonnegative solution")
    for i in range(m):
        if basis[i] >= n:
            c = next((j for j in range(n) if rows[i][j] != 0), None)
            if c is not None:
                pivot(i, c)
    z = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            z[j] = rhs[i]
    return z
