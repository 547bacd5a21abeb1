"""
Exact simplex over fractions.Fraction for LPs of the form

    maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.

The origin is feasible, so the slack basis starts the method and no phase one is needed.
Bland's rule guarantees termination.
"""

import logging
from fractions import Fraction
from typing import List, Sequence

from interfaces.invariant_report import RationalLPResult
from utils.errors import DimensionMismatch, LPUnbounded

ZERO = Fraction(0)


def maximize(
    c: Sequence,
    A: Sequence[Sequence],
    b: Sequence,
    max_pivots: int = 100_000,
) -> RationalLPResult:
    m, n = len(b), len(c)
    c = [Fraction(x) for x in c]
    b = [Fraction(x) for x in b]
    if any(len(row) != n for row in A):
        raise DimensionMismatch(f"constraint rows must have {n} entries")
    if any(x < 0 for x in b):
        raise ValueError("right-hand side must be nonnegative")

    width = n + m
    # rows: [A | I | b]; sparse row dicts keep the pivots cheap on 0/1 data
    rows: List[dict] = []
    for i in range(m):
        row = {j: Fraction(a) for j, a in enumerate(A[i]) if a != 0}
        row[n + i] = Fraction(1)
        rows.append(row)
    rhs = list(b)
    basis = [n + i for i in range(m)]
    reduced = {j: c[j] for j in range(n) if c[j] != 0}
    objective = ZERO

    pivots = 0
    while True:
        entering = min((j for j, r in reduced.items() if r > 0), default=None)
        if entering is None:
            break
        if pivots >= max_pivots:
            raise RuntimeError(f"simplex did not finish within {max_pivots} pivots")

        leaving, best = None, None
        for i in range(m):
            a = rows[i].get(entering, ZERO)
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    leaving, best = i, ratio
        if leaving is None:
            raise LPUnbounded(f"objective unbounded along column {entering}")

        pivot_row = rows[leaving]
        pivot = pivot_row[entering]
        if pivot != 1:
            pivot_row = {j: a / pivot for j, a in pivot_row.items()}
            rows[leaving] = pivot_row
            rhs[leaving] /= pivot

        for i in range(m):
            if i == leaving:
                continue
            factor = rows[i].get(entering)
            if not factor:
                continue
            row = rows[i]
            for j, a in pivot_row.items():
                value = row.get(j, ZERO) - factor * a
                if value:
                    row[j] = value
                else:
                    row.pop(j, None)
            rhs[i] -= factor * rhs[leaving]

        factor = reduced.get(entering, ZERO)
        for j, a in pivot_row.items():
            value = reduced.get(j, ZERO) - factor * a
            if value:
                reduced[j] = value
            else:
                reduced.pop(j, None)
        objective += factor * rhs[leaving]
        basis[leaving] = entering
        pivots += 1

    primal = [ZERO] * n
    for i, j in enumerate(basis):
        if j < n:
            primal[j] = rhs[i]
    # the reduced cost of slack i is -y_i at the optimum
    dual = [-reduced.get(n + i, ZERO) for i in range(m)]

    logging.debug(f"Rational simplex: {m} rows, {width} columns, {pivots} pivots, optimum {objective}")
    return RationalLPResult(optimum=objective, primal=primal, dual=dual, pivots=pivots)
