"""Two-phase primal simplex over exact rationals.

Solves ``min/max c.x  s.t.  A x = b, x >= 0`` with Bland's anti-cycling
rule. Sizes here are tiny (a few hundred columns) so a dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    nz = [k for k, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r and other[c]:
            f = other[c]
            for k in nz:
                other[k] -= f * row[k]
    basis[r] = c


def _simplex(T, basis, cost, allowed) -> bool:
    """Minimise the cost row in place; False when unbounded.

    ``cost`` is the reduced-cost row (last tableau entry holds -objective).
    """
    width = len(cost) - 1
    while True:
        enter = next((k for k in range(width) if allowed[k] and cost[k] < 0), None)
        if enter is None:
            return True
        best = None
        for r, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return False
        r = best[1]
        _pivot(T, basis, r, enter)
        f = cost[enter]
        row = T[r]
        for k, v in enumerate(row):
            if v:
                cost[k] -= f * v


def linprog(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence, maximize: bool = False) -> LPResult:
    m = len(A_eq)
    nvar = len(c)
    A = [[Fraction(v) for v in row] for row in A_eq]
    b = [Fraction(v) for v in b_eq]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: original vars, artificials, rhs
    T = [A[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [nvar + i for i in range(m)]
    width = nvar + m
    cost = [ZERO] * (width + 1)
    for i in range(m):
        for k in range(nvar):
            cost[k] -= T[i][k]
        cost[-1] -= T[i][-1]
    _simplex(T, basis, cost, [True] * width)
    if cost[-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(T):
        if basis[r] >= nvar:
            col = next((k for k in range(nvar) if T[r][k]), None)
            if col is None:
                del T[r]
                del basis[r]
                continue
            _pivot(T, basis, r, col)
        r += 1
    sign = -1 if maximize else 1
    obj = [sign * Fraction(v) for v in c] + [ZERO] * m + [ZERO]
    for r, j in enumerate(basis):
        f = obj[j]
        if f:
            for k, v in enumerate(T[r]):
                if v:
                    obj[k] -= f * v
    allowed = [True] * nvar + [False] * m
    if not _simplex(T, basis, obj, allowed):
        return LPResult("unbounded")
    x = [ZERO] * nvar
    for r, j in enumerate(basis):
        x[j] = T[r][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", tuple(x), value)
