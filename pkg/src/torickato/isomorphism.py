"""Equivariant isomorphism test for toric Kato data.

The procedure is sound but incomplete: it answers Yes with a verified
witness, No with a certificate, or Unknown.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .invariants import betti
from .kato import GaussQ, KatoData


class Answer(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IsoVerdict:
    answer: Answer
    witness: Optional[tuple] = None  # (Q, shift)
    certificate: Optional[str] = None

    def __str__(self) -> str:
        if self.answer is Answer.YES:
            Q, k = self.witness
            return f"Yes: Q = {[list(r) for r in Q]}, shift {k}"
        if self.answer is Answer.NO:
            return f"No: {self.certificate}"
        return f"Unknown: {self.certificate}"


def commutant_basis(A, B) -> list[tuple]:
    """Integer basis of {Q : Q A = B Q} as n x n matrices."""
    n = len(A)
    # unknown Q[i][j] at index i*n+j; equation (QA - BQ)[i][k] = 0
    rows = []
    for i in range(n):
        for k in range(n):
            row = [0] * (n * n)
            for j in range(n):
                row[i * n + j] += A[j][k]
                row[j * n + k] -= B[i][j]
            rows.append(row)
    return [tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)) for v in la.int_kernel(rows)]


def lambda_condition(Q, ell, m, B) -> bool:
    """Q ell - m in Im(B - id) + Z^n (complex image, integer lattice)."""
    n = len(B)
    x = [a - b for a, b in zip(la.mat_vec(Q, [z.re for z in ell]), [z.re for z in m])]
    y = [a - b for a, b in zip(la.mat_vec(Q, [z.im for z in ell]), [z.im for z in m])]
    BmI = la.mat_sub(B, la.identity(n))
    if not la.in_column_space(BmI, y):
        return False
    return la.affine_lattice_membership(x, BmI)


def _cokernel_functionals(B) -> list[tuple]:
    """Integer basis of the covectors vanishing on Im(B - id)."""
    n = len(B)
    return la.left_int_kernel(la.mat_sub(B, la.identity(n)))


def _pair(y, ell) -> GaussQ:
    return GaussQ(sum(Fraction(a) * z.re for a, z in zip(y, ell)),
                  sum(Fraction(a) * z.im for a, z in zip(y, ell)))


def _is_integer(z: GaussQ) -> bool:
    return z.im == 0 and z.re.denominator == 1


def _fmt_functional(y, sym: str) -> str:
    sub = "₀₁₂₃₄₅₆₇₈₉"
    terms = []
    for j, a in enumerate(y):
        if a == 0:
            continue
        name = sym + "".join(sub[int(c)] for c in str(j + 1))
        coef = "" if abs(a) == 1 else str(abs(a))
        sign = "-" if a < 0 else "+"
        terms.append((sign, coef + name))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sgn, t in terms[1:]:
        out += f" {'−' if sgn == '-' else '+'} {t}"
    return out.replace("-", "−")


def _lambda_certificate(dX: KatoData, dY: KatoData) -> Optional[str]:
    """Certificate that the ell-condition fails for every Q conjugating A to B."""
    Y = _cokernel_functionals(dY.A)
    YA = _cokernel_functionals(dX.A)
    if len(Y) != len(YA):
        return "dimensions of ker(A − id) and ker(B − id) differ"
    r = len(Y)
    if r == 0:
        return None
    ell, m = dX.ell, dY.ell
    if r == 1:
        # Q induces +-1 between the rank-one cokernel lattices
        yB, yA = Y[0], YA[0]
        vals = []
        for eps in (1, -1):
            z = _pair(yA, ell).scale(eps) - _pair(yB, m)
            vals.append(_is_integer(z))
        if any(vals):
            return None
        lhs = _fmt_functional(yA, "ℓ")
        rhs = _fmt_functional(yB, "m")
        wrap = (lambda t: f"({t})") if (" " in rhs or rhs.startswith("−")) else (lambda t: t)
        neg = f"−({lhs})" if " " in lhs else f"−{lhs}"
        return (f"{lhs} − {wrap(rhs)} ∉ Z and {neg} − {wrap(rhs)} ∉ Z; the condition depends only "
                f"on the map ±1 induced on coker(B − id), so it fails for every admissible Q")
    # general rank: each row of the induced integer matrix G must solve G_i.(Y_A ell) - (Y_B m)_i in Z
    u = [_pair(y, ell) for y in YA]
    for yB in Y:
        t = _pair(yB, m)
        # unknowns g (r ints) and k (int): g.Re u - k = Re t, g.Im u = Im t
        rows = [[z.re for z in u] + [-1], [z.im for z in u] + [0]]
        rhs = [t.re, t.im]
        L = la.denominator_lcm([x for row in rows for x in row] + rhs)
        Mi = [[int(x * L) for x in row] for row in rows]
        bi = [int(x * L) for x in rhs]
        if la.solve_diophantine(Mi, bi) is None:
            return ("no integer map between the cokernels of A − id and B − id carries ℓ to m "
                    "modulo the lattice")
    return None


def _rays_match(dX: KatoData, dY: KatoData, Q, shift_bound: int) -> Optional[int]:
    """Check Q(Sigma_A) = Sigma_B on fundamental domains; return a shift or None."""
    B = dY.A
    targetY = dY.sigma0_cones
    targetX = dX.sigma0_cones
    Binv = la.inverse_unimodular(B)
    Qinv = la.inverse_unimodular(Q)
    powers = {k: la.mat_pow(Binv, k) if k >= 0 else la.mat_pow(B, -k)
              for k in range(-shift_bound, shift_bound + 1)}
    shifts = []
    for c in sorted(dX.fan.maximal_cones):
        if c == dX.tau:
            continue
        img = c.transform(Q)
        found = None
        for k in sorted(powers, key=lambda k: (abs(k), k)):
            if img.transform(powers[k]) in targetY:
                found = k
                break
        if found is None:
            return None
        shifts.append(found)
    Ainv = la.inverse_unimodular(dX.A)
    apow = {k: la.mat_pow(Ainv, k) if k >= 0 else la.mat_pow(dX.A, -k)
            for k in range(-shift_bound, shift_bound + 1)}
    for c in sorted(dY.fan.maximal_cones):
        if c == dY.tau:
            continue
        img = c.transform(Qinv)
        if not any(img.transform(M) in targetX for M in apow.values()):
            return None
    return min(shifts, key=lambda k: (abs(k), k)) if shifts else 0


def _char_poly_certificate(dX: KatoData, dY: KatoData) -> Optional[str]:
    if la.char_poly(dX.A) != la.char_poly(dY.A):
        return "A and B have different characteristic polynomials, so no Q conjugates them"
    if betti(dX) != betti(dY):
        return "Betti numbers differ"
    if dX.kind != dY.kind:
        return "types differ"
    return None


def _fast_path(dX: KatoData, dY: KatoData) -> bool:
    n = dX.n
    return (dX.fan == dY.fan and dX.A == dY.A
            and la.det(la.mat_sub(dX.A, la.identity(n))) != 0)


def _vectors_of_norm(r: int, t: int, bound: int):
    """Integer vectors of length r, L1 norm t, entries bounded by `bound` (lex order)."""
    if r == 0:
        if t == 0:
            yield ()
        return
    for first in range(-min(t, bound), min(t, bound) + 1):
        for rest in _vectors_of_norm(r - 1, t - abs(first), bound):
            yield (first,) + rest


MAX_CANDIDATES = 200_000


def _candidates(dX, dY, basis, coeff_bound):
    n = dX.n
    seen = set()
    if dX.A == dY.A:
        I = la.identity(n)
        seen.add(I)
        yield I
    tried = 0
    for t in range(len(basis) * coeff_bound + 1):
        for coeffs in _vectors_of_norm(len(basis), t, coeff_bound):
            tried += 1
            if tried > MAX_CANDIDATES:
                return
            Q = tuple(tuple(sum(c * M[i][j] for c, M in zip(coeffs, basis)) for j in range(n))
                      for i in range(n))
            if Q in seen or any(x < 0 for r in Q for x in r) or abs(la.det(Q)) != 1:
                continue
            seen.add(Q)
            yield Q


def find_equivariant_iso(dX: KatoData, dY: KatoData, coeff_bound: int = 8,
                         shift_bound: Optional[int] = None) -> IsoVerdict:
    if dX.n != dY.n:
        return IsoVerdict(Answer.NO, certificate="dimensions differ")
    if shift_bound is None:
        shift_bound = 2 * max(dX.kato.order, dY.kato.order) + 4
    have_ell = dX.ell is not None and dY.ell is not None
    if _fast_path(dX, dY):
        return IsoVerdict(Answer.YES, (la.identity(dX.n), 0),
                          "1 is not an eigenvalue of A, so the condition on ℓ is empty")
    cert = _char_poly_certificate(dX, dY)
    if cert:
        return IsoVerdict(Answer.NO, certificate=cert)
    if have_ell:
        cert = _lambda_certificate(dX, dY)
        if cert:
            return IsoVerdict(Answer.NO, certificate=cert)
    basis = commutant_basis(dX.A, dY.A)
    if not basis:
        return IsoVerdict(Answer.NO, certificate="no integer matrix intertwines A and B")
    for Q in _candidates(dX, dY, basis, coeff_bound):
        shift = _rays_match(dX, dY, Q, shift_bound)
        if shift is None:
            continue
        if have_ell and not lambda_condition(Q, dX.ell, dY.ell, dY.A):
            continue
        note = None if have_ell else "no log-parameters given; only the fans were matched"
        return IsoVerdict(Answer.YES, (Q, shift), note)
    return IsoVerdict(Answer.UNKNOWN, certificate=f"no admissible Q with coefficients ≤ {coeff_bound}")


def verify_witness(dX: KatoData, dY: KatoData, verdict: IsoVerdict, window: int = 2) -> bool:
    """Independent re-check of a Yes answer on truncated ray sets."""
    Q, shift = verdict.witness
    if la.mat_mul(Q, dX.A) != la.mat_mul(dY.A, Q) or abs(la.det(Q)) != 1:
        return False
    if any(x < 0 for r in Q for x in r):
        return False

    def rays_window(d, lo, hi):
        out = set()
        base = [c.generators[0] for c in d.sigma0_cones if c.dim == 1]
        for k in range(lo, hi + 1):
            M = la.mat_pow(d.A, k)
            out.update(la.mat_vec(M, r) for r in base)
        return out

    B_shift = la.mat_pow(dY.A, -shift)
    src = rays_window(dX, 0, window)
    reach = window + abs(shift) + 2 * len(dY.fan.rays) + 2
    tgt = rays_window(dY, -reach, reach)
    if not all(la.mat_vec(B_shift, la.mat_vec(Q, r)) in tgt for r in src):
        return False
    if dX.ell is not None and dY.ell is not None:
        return lambda_condition(Q, dX.ell, dY.ell, dY.A)
    return True
