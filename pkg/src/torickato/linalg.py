"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding Python ints (or Fractions where
noted).  Nothing here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

Vector = tuple
Matrix = tuple


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Sequence[Sequence]) -> Matrix:
    if not M:
        return ()
    return tuple(zip(*M))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vec_mat(v: Sequence, A: Sequence[Sequence]) -> Vector:
    return mat_vec(transpose(A), v)


def mat_add(A, B) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A, B))


def mat_sub(A, B) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def mat_scale(c, A) -> Matrix:
    return tuple(tuple(c * a for a in r) for r in A)


def column(M: Sequence[Sequence], j: int) -> Vector:
    return tuple(r[j] for r in M)


def columns(M: Sequence[Sequence]) -> list[Vector]:
    return list(transpose(M))


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(cols)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_pow(M: Sequence[Sequence], k: int) -> Matrix:
    """M**k by binary exponentiation.  Negative k needs |det M| = 1."""
    M = as_matrix(M)
    n = len(M)
    if k < 0:
        M = inverse_unimodular(M)
        k = -k
    result = identity(n)
    base = M
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def det(M: Sequence[Sequence]) -> int:
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    if any(len(r) != n for r in A):
        raise ValueError("det of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                v = row_i[j] * akk - aik * row_k[j]
                row_i[j] = v // prev if isinstance(v, int) else v / prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def inverse_unimodular(M: Sequence[Sequence]) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    inv = inverse_rational(M)
    if inv is None or any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


def _rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in r] for r in M]
    m, n = shape(A)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(_rref(M)[1])


def inverse_rational(M: Sequence[Sequence]) -> Optional[Matrix]:
    n = len(M)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
    R, piv = _rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return tuple(tuple(r[n:]) for r in R)


def solve_rational(M: Sequence[Sequence], b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One rational solution of M x = b, or None."""
    m, n = shape(M)
    aug = [list(r) + [b[i]] for i, r in enumerate(M)]
    R, piv = _rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return tuple(x)


def nullspace_rational(M: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    m, n = shape(M)
    R, piv = _rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(tuple(v))
    return basis


def in_column_space(M: Sequence[Sequence], x: Sequence) -> bool:
    if not M or not M[0]:
        return all(v == 0 for v in x)
    return solve_rational(M, x) is not None


def denominator_lcm(values: Iterable) -> int:
    L = 1
    for v in values:
        d = Fraction(v).denominator
        L = L * d // gcd(L, d)
    return L


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


class SNF(NamedTuple):
    D: Matrix
    U: Matrix
    V: Matrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(shape(self.D))
        return tuple(self.D[i][i] for i in range(k) if self.D[i][i] != 0)


def snf(M: Sequence[Sequence[int]]) -> SNF:
    """Smith normal form D = U M V with U, V unimodular.

    The diagonal of D is nonnegative and each entry divides the next.
    """
    A = [list(map(int, r)) for r in M]
    m, n = shape(A)
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for r in R:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for R in (A, U):
            rd, rs = R[dst], R[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for R in (A, V):
            for r in R:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remaining entry of row/col t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            for R in (A, U):
                R[t] = [-x for x in R[t]]
        t += 1
    return SNF(as_matrix(A), as_matrix(U), as_matrix(V))


def hnf_rows(rows: Iterable[Sequence[int]]) -> list[Vector]:
    """Row Hermite normal form of the lattice spanned by `rows` (zero rows dropped)."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    n = len(A[0])
    out: list[list[int]] = []
    r = 0
    for c in range(n):
        nz = [i for i in range(r, len(A)) if A[i][c] != 0]
        if not nz:
            continue
        # gcd-combine all rows below into row r
        A[r], A[nz[0]] = A[nz[0]], A[r]
        for i in range(r + 1, len(A)):
            while A[i][c] != 0:
                q = A[r][c] // A[i][c]
                A[r] = [a - q * b for a, b in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    out = [row for row in A[:r]]
    return [tuple(row) for row in out]


def int_kernel(M: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis (in row Hermite form) of {x in Z^n : M x = 0}."""
    m, n = shape(M)
    if m == 0:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    res = snf(M)
    r = len(res.invariant_factors)
    basis = [column(res.V, j) for j in range(r, n)]
    return hnf_rows(basis)


def left_int_kernel(M: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis of {y in Z^m : y M = 0}; it spans a saturated sublattice."""
    m, n = shape(M)
    if n == 0:
        return [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    return int_kernel(transpose(M))


def solve_diophantine(M: Sequence[Sequence[int]], b: Sequence[int]
                      ) -> Optional[tuple[Vector, list[Vector]]]:
    """Integer solutions of M x = b as (particular, kernel basis), or None."""
    m, n = shape(M)
    if any(Fraction(x).denominator != 1 for r in M for x in r) or any(
            Fraction(x).denominator != 1 for x in b):
        raise ValueError("solve_diophantine needs integer data")
    res = snf(M)
    Ub = mat_vec(res.U, b)
    r = len(res.invariant_factors)
    y = [0] * n
    for i in range(m):
        if i < r:
            d = res.D[i][i]
            if Ub[i] % d:
                return None
            y[i] = Ub[i] // d
        elif Ub[i] != 0:
            return None
    x = mat_vec(res.V, y)
    kernel = [column(res.V, j) for j in range(r, n)]
    kernel = hnf_rows(kernel)
    return tuple(int(v) for v in x), kernel


def scale_to_integers(M: Sequence[Sequence]) -> tuple[Matrix, int]:
    L = denominator_lcm(x for r in M for x in r)
    return tuple(tuple(int(Fraction(x) * L) for x in r) for r in M), L


def affine_lattice_witness(x: Sequence, M: Sequence[Sequence]
                           ) -> Optional[tuple[tuple[Fraction, ...], Vector]]:
    """Find rational w and integer k with x = M w + k, or None."""
    n = len(x)
    if M and M[0]:
        Mi, _ = scale_to_integers(M)
    else:
        Mi = tuple(() for _ in range(n))
    Y = left_int_kernel(Mi)
    if not Y:
        k = tuple(0 for _ in range(n))
    else:
        Yx = [sum(Fraction(a) * Fraction(v) for a, v in zip(y, x)) for y in Y]
        if any(v.denominator != 1 for v in Yx):
            return None
        sol = solve_diophantine(Y, [int(v) for v in Yx])
        if sol is None:  # cannot happen for a saturated Y
            return None
        k = sol[0]
    rest = [Fraction(a) - b for a, b in zip(x, k)]
    if not M or not M[0]:
        return ((), k) if all(v == 0 for v in rest) else None
    w = solve_rational(M, rest)
    if w is None:
        return None
    return w, k


def affine_lattice_membership(x: Sequence, M: Sequence[Sequence]) -> bool:
    """Decide x in M Q^k + Z^n for rational x and M."""
    return affine_lattice_witness(x, M) is not None


def char_poly(M: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients [c_n, ..., c_0] of det(t I - M) (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    I = identity(n)
    AM = None
    for k in range(1, n + 1):
        Mk = [[Mk_ij + (coeffs[-1] if i == j else 0) for j, Mk_ij in enumerate(row)]
              for i, row in enumerate(Mk)] if k > 1 else [[Fraction(v) for v in r] for r in I]
        AM = mat_mul(M, Mk)
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c)
        Mk = [list(r) for r in AM]
    return [int(c) for c in coeffs]


def poly_eval_matrix(coeffs: Sequence[int], M: Sequence[Sequence[int]]) -> Matrix:
    """Evaluate a polynomial (highest degree first) at a square matrix."""
    n = len(M)
    R = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    for c in coeffs:
        R = mat_add(mat_mul(R, M), mat_scale(c, identity(n)))
    return R
