"""Exact rational LP feasibility by a two-phase-free Phase I simplex.

Bland's rule is used for pivoting, so the method terminates.  Strict
inequalities are expressed by the caller with an explicit margin.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Row = Sequence


def lp_feasible(equalities: Sequence[tuple[Row, object]] = (),
                inequalities: Sequence[tuple[Row, object]] = (),
                nvars: Optional[int] = None) -> Optional[tuple[Fraction, ...]]:
    """Find x (free variables) with a.x == b for equalities and a.x >= b for
    inequalities.  Returns a feasible point or None.
    """
    rows = list(equalities) + list(inequalities)
    if nvars is None:
        if not rows:
            return ()
        nvars = len(rows[0][0])
    if not rows:
        return tuple(Fraction(0) for _ in range(nvars))
    neq = len(equalities)
    nin = len(inequalities)
    m = len(rows)
    # columns: p (nvars), q (nvars), slacks (nin), artificials (m)
    ncols = 2 * nvars + nin + m
    T: list[list[Fraction]] = []
    for i, (a, b) in enumerate(rows):
        a = [Fraction(x) for x in a]
        b = Fraction(b)
        row = a + [-x for x in a] + [Fraction(0)] * (nin + m)
        if i >= neq:
            row[2 * nvars + (i - neq)] = Fraction(-1)
        if b < 0:
            row = [-x for x in row]
            b = -b
        row[2 * nvars + nin + i] = Fraction(1)
        T.append(row + [b])
    basis = [2 * nvars + nin + i for i in range(m)]
    art0 = 2 * nvars + nin
    # objective: minimise sum of artificials -> reduced costs
    obj = [Fraction(0)] * (ncols + 1)
    for row in T:
        for j in range(ncols + 1):
            obj[j] -= row[j]
    for i in range(m):
        obj[art0 + i] = Fraction(0)
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded cannot occur for Phase I
            break
        piv = T[leave][enter]
        prow = [x / piv for x in T[leave]]
        T[leave] = prow
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                Ti = T[i]
                T[i] = [x - f * y for x, y in zip(Ti, prow)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, prow)]
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    val = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        val[j] = T[i][-1]
    return tuple(val[k] - val[nvars + k] for k in range(nvars))
