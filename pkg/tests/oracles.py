"""Brute-force reference implementations used to cross-check the library."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import gcd


def leibniz_det(M) -> int:
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= M[i][perm[i]]
        total += sign * prod
    return total


def determinantal_divisors(M) -> list[int]:
    """d_k = gcd of all k x k minors, for k = 1 .. rank."""
    m, n = len(M), len(M[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, leibniz_det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(M) -> list[int]:
    d = determinantal_divisors(M)
    return [d[0]] + [d[k] // d[k - 1] for k in range(1, len(d))] if d else []


def box(n: int, r: int):
    return itertools.product(range(-r, r + 1), repeat=n)


def kernel_in_box(M, r: int) -> list[tuple]:
    n = len(M[0])
    return [x for x in box(n, r)
            if all(sum(a * b for a, b in zip(row, x)) == 0 for row in M)]


def solve_in_box(M, b, r: int):
    n = len(M[0])
    for x in box(n, r):
        if all(sum(a * c for a, c in zip(row, x)) == bi for row, bi in zip(M, b)):
            return x
    return None


def _solve_square(rows, rhs):
    # exact solve via Cramer with fractions
    n = len(rows)
    D = Fraction(leibniz_det([[Fraction(x) for x in r] for r in rows]))
    if D == 0:
        return None
    sol = []
    for j in range(n):
        Mj = [[rhs[i] if k == j else rows[i][k] for k in range(n)] for i in range(n)]
        sol.append(Fraction(leibniz_det([[Fraction(x) for x in r] for r in Mj])) / D)
    return sol


def lp_vertex_oracle(equalities, inequalities, nvars: int) -> bool:
    """Feasibility of a bounded system by enumerating candidate vertices.

    The caller must include box constraints so the polyhedron is pointed.
    """
    eq = [(list(map(Fraction, a)), Fraction(b)) for a, b in equalities]
    ineq = [(list(map(Fraction, a)), Fraction(b)) for a, b in inequalities]

    def ok(x):
        return (all(sum(c * y for c, y in zip(a, x)) == b for a, b in eq)
                and all(sum(c * y for c, y in zip(a, x)) >= b for a, b in ineq))

    # a vertex is a feasible point where nvars independent constraints are tight
    for tight in itertools.combinations(eq + ineq, nvars):
        x = _solve_square([a for a, _ in tight], [b for _, b in tight])
        if x is not None and ok(x):
            return True
    return False


def pa_oracle(A) -> tuple[frozenset, dict]:
    """P(A) via high powers: j in P iff column j of A^M stays standard for all M."""
    n = len(A)
    steps = math.factorial(n) * (n + 2)
    cur = [[int(i == j) for j in range(n)] for i in range(n)]
    powers = []
    for _ in range(steps):
        cur = [[sum(cur[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        powers.append(cur)
    Pset = set()
    for j in range(n):
        if all(sorted(Mk[i][j] for i in range(n)) == [0] * (n - 1) + [1] for Mk in powers):
            Pset.add(j)
    last = powers[-1]
    for j in range(n):
        if j not in Pset:
            assert all(last[i][j] > 0 for i in range(n)), "column neither standard nor positive"
    s = {j: [i for i in range(n) if A[i][j] == 1][0] for j in Pset}
    return frozenset(Pset), s
