"""Kato matrices and toric Kato data.

Indices are 0-based in the Python API; reports print them 1-based.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import linalg as la
from .fans import (Cone, Containment, Fan, cone_contains, fan_validate, orthant_fan,
                   refines, standard_basis)


class Kind(enum.Enum):
    HOPF = "Hopf"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


class GaussQ(NamedTuple):
    """Gaussian rational re + i*im."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re, im=0) -> "GaussQ":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, o):
        return GaussQ(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return GaussQ(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def scale(self, k) -> "GaussQ":
        return GaussQ(self.re * k, self.im * k)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


def gauss_mat_vec(M, ell: Sequence[GaussQ]) -> tuple[GaussQ, ...]:
    re = la.mat_vec(M, [z.re for z in ell])
    im = la.mat_vec(M, [z.im for z in ell])
    return tuple(GaussQ(Fraction(a), Fraction(b)) for a, b in zip(re, im))


def is_standard(v: Sequence[int]) -> bool:
    return sorted(v) == [0] * (len(v) - 1) + [1]


def is_kato_matrix(A) -> bool:
    A = la.as_matrix(A)
    n = len(A)
    if any(len(r) != n for r in A):
        return False
    if abs(la.det(A)) != 1:
        return False
    for col in la.columns(A):
        if not (all(x > 0 for x in col) or is_standard(col)):
            return False
    return True


def pa_set(A) -> tuple[frozenset, dict, int]:
    """(P, s, m0) from the iteration S_m = S_{m-1} & k^{-1}(S_{m-1})."""
    A = la.as_matrix(A)
    cols = la.columns(A)
    k = {j: c.index(1) for j, c in enumerate(cols) if is_standard(c)}
    S = set(k)
    m = 1
    while True:
        nxt = {j for j in S if k[j] in S}
        if nxt == S:
            break
        S = nxt
        m += 1
    return frozenset(S), {j: k[j] for j in sorted(S)}, m


def cycles_of(s: dict) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for j in sorted(s):
        if j in seen:
            continue
        cyc = [j]
        seen.add(j)
        x = s[j]
        while x != j:
            cyc.append(x)
            seen.add(x)
            x = s[x]
        out.append(tuple(cyc))
    return out


def perm_order(s: dict) -> int:
    from math import lcm
    o = 1
    for c in cycles_of(s):
        o = lcm(o, len(c))
    return o


@dataclass(frozen=True)
class KatoMatrix:
    A: tuple
    P: frozenset
    s: dict = field(compare=False, hash=False)
    m0: int

    @classmethod
    def of(cls, A) -> "KatoMatrix":
        A = la.as_matrix(A)
        if not is_kato_matrix(A):
            raise ValueError(f"{A} is not a toric Kato matrix")
        P, s, m0 = pa_set(A)
        return cls(A, P, s, m0)

    @property
    def n(self) -> int:
        return len(self.A)

    @cached_property
    def cycles(self) -> list[tuple[int, ...]]:
        return cycles_of(self.s)

    @property
    def order(self) -> int:
        return perm_order(self.s)

    @property
    def kind(self) -> Kind:
        return classify(self.A)


def classify(A) -> Kind:
    A = la.as_matrix(A)
    n = len(A)
    P = pa_set(A)[0]
    if len(P) == n:
        return Kind.HOPF
    if len(P) == n - 1:
        return Kind.PARABOLIC
    return Kind.HYPERBOLIC


@dataclass(frozen=True)
class PerronData:
    alpha: float
    f: tuple
    f_star: tuple
    residual: float
    residual_star: float


@dataclass(frozen=True)
class PerronMarker:
    """Returned instead of Perron data for Hopf and parabolic matrices."""

    kind: Kind
    functional: Optional[int] = None  # index j with H(A) = {e_j^* > 0} (parabolic)

    def __str__(self) -> str:
        if self.kind is Kind.HOPF:
            return "no Perron data (Hopf)"
        return f"no Perron data (parabolic; H(A) = {{e_{self.functional + 1}* > 0}})"


def perron(A, tol: float = 1e-12):
    K = KatoMatrix.of(A)
    kind = K.kind
    n = K.n
    if kind is Kind.HOPF:
        return PerronMarker(kind)
    Pc = [j for j in range(n) if j not in K.P]
    if kind is Kind.PARABOLIC:
        return PerronMarker(kind, Pc[0])
    P = sorted(K.P)
    Af = np.array(K.A, dtype=float)
    B = Af[np.ix_(Pc, Pc)]
    m = K.m0 * K.order
    Bm = np.linalg.matrix_power(B, m)
    Bm = Bm / Bm.max()

    def dominant(M, Mp):
        x = np.ones(M.shape[0])
        for _ in range(10_000):
            y = Mp @ x
            y /= np.abs(y).max()
            if np.abs(y - x).max() < 1e-15:
                x = y
                break
            x = y
        lam = float((M @ x) @ x / (x @ x))
        # polish with shifted inverse iteration
        for _ in range(5):
            try:
                y = np.linalg.solve(M - (lam + 1e-13 * lam) * np.eye(M.shape[0]), x)
            except np.linalg.LinAlgError:
                break
            x = y / np.abs(y).max()
            lam = float((M @ x) @ x / (x @ x))
        return lam, (x if x.sum() > 0 else -x)

    alpha, fB = dominant(B, Bm)
    _, fBs = dominant(B.T, Bm.T)
    f = np.zeros(n)
    f[Pc] = fB
    if P:
        AP = Af[np.ix_(P, P)]
        X = Af[np.ix_(P, Pc)]
        f[P] = np.linalg.solve(alpha * np.eye(len(P)) - AP, X @ fB)
    fs = np.zeros(n)
    fs[Pc] = fBs
    f = f / np.abs(f).max()
    if f.sum() < 0:
        f = -f
    fs = fs / (fs @ f)
    res = float(np.abs(Af @ f - alpha * f).max() / (alpha * np.abs(f).max()))
    res_s = float(np.abs(Af.T @ fs - alpha * fs).max() / (alpha * np.abs(fs).max()))
    return PerronData(alpha, tuple(float(x) for x in f), tuple(float(x) for x in fs), res, res_s)


def sub_kato(A, J) -> tuple:
    K = KatoMatrix.of(A)
    J = set(J)
    if not J <= K.P or any(K.s[j] not in J for j in J):
        raise ValueError("J must be an s-invariant subset of P(A)")
    if len(J) >= K.n - 1:
        raise ValueError("J is too large")
    keep = [i for i in range(K.n) if i not in J]
    return tuple(tuple(K.A[i][j] for j in keep) for i in keep)


@dataclass(frozen=True)
class KatoData:
    """Fan of the modification, distinguished cone tau_A, its matrix and ell."""

    fan: Fan
    A: tuple
    ell: Optional[tuple] = None
    ell_exact: bool = True

    @property
    def n(self) -> int:
        return self.fan.ambient_dim

    @cached_property
    def tau(self) -> Cone:
        return Cone.of(la.columns(self.A), self.n, check=False)

    @cached_property
    def kato(self) -> KatoMatrix:
        return KatoMatrix.of(self.A)

    @property
    def kind(self) -> Kind:
        return self.kato.kind

    @cached_property
    def sigma0_cones(self) -> frozenset:
        """All cones of the fan except tau_A."""
        return frozenset(c for c in self.fan.all_cones if c != self.tau)


def make_data(fan: Fan, columns, ell=None) -> KatoData:
    A = la.from_columns([tuple(c) for c in columns])
    if ell is not None:
        ell = tuple(z if isinstance(z, GaussQ) else GaussQ.of(*z) for z in ell)
    return KatoData(fan, A, ell)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple

    @property
    def valid(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.valid


def validate_kato_data(d: KatoData, check_fan: bool = True) -> ValidationReport:
    errs = []
    n = d.n
    A = d.A
    if len(A) != n or any(len(r) != n for r in A):
        return ValidationReport((f"A must be {n}x{n}",))
    if check_fan:
        rep = fan_validate(d.fan)
        if not rep.valid:
            errs.append(f"fan invalid: {rep.reason}")
        elif not rep.regular:
            errs.append(f"fan not regular: {rep.irregular_cones[0]}")
    if not refines(d.fan, orthant_fan(n)):
        errs.append("fan does not refine the positive orthant")
    std = set(standard_basis(n))
    for r in d.fan.rays:
        if r not in std and not all(x > 0 for x in r):
            errs.append(f"new ray {r} is not strictly positive")
    if not is_kato_matrix(A):
        errs.append("A is not a toric Kato matrix")
        return ValidationReport(tuple(errs))
    if d.tau not in d.fan.maximal_cones or d.tau.dim != n:
        errs.append(f"tau_A = {d.tau} is not a maximal cone of the fan")
    if d.fan == orthant_fan(n) and len(pa_set(A)[0]) != n:
        errs.append("trivial modification requires a permutation matrix")
    if d.ell is not None:
        if len(d.ell) != n:
            errs.append("ell has wrong length")
        else:
            for j, row in enumerate(A):
                if sum(row) == 1 and not d.ell[j].im > 0:
                    errs.append(f"contraction criterion fails: row {j + 1} sums to 1 "
                                f"but Im(ell_{j + 1}) = {d.ell[j].im} is not positive")
    return ValidationReport(tuple(errs))


def power_fan(d: KatoData, k: int) -> Fan:
    """Maximal cones of {A^j t : 0 <= j < k, t in Sigma_0} + {A^(k-1) tau_A}."""
    cones = []
    for j in range(k):
        Aj = la.mat_pow(d.A, j)
        cones += [c.transform(Aj) for c in d.fan.maximal_cones if c != d.tau]
    cones.append(d.tau.transform(la.mat_pow(d.A, k - 1)))
    return Fan.from_cones(cones, d.n)


def power_data(d: KatoData, k: int) -> KatoData:
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return d
    Ak = la.mat_pow(d.A, k)
    # column order: A^(k-1) applied to the ordered columns of A
    fan = power_fan(d, k)
    ell = None
    if d.ell is not None:
        S = la.identity(d.n)
        total = la.identity(d.n)
        for _ in range(k - 1):
            S = la.mat_mul(S, d.A)
            total = la.mat_add(total, S)
        ell = gauss_mat_vec(total, d.ell)
    return KatoData(fan, Ak, ell, d.ell_exact)


def collapsed_fan(d: KatoData, l: int, m: int) -> Fan:
    """Sigma_A^{l.m}: union over l <= k < m of A^k(Sigma_hat minus faces of tau_A), plus A^m C_0."""
    if l > m:
        raise ValueError("need l <= m")
    tau_faces = set(d.tau.faces())
    annulus = [c for c in d.fan.all_cones if c not in tau_faces]
    cones = set()
    for k in range(l, m):
        Ak = la.mat_pow(d.A, k)
        cones.update(c.transform(Ak) for c in annulus)
    Am = la.mat_pow(d.A, m)
    cones.update(c.transform(Am) for c in orthant_fan(d.n).all_cones)
    return Fan.from_cones(cones, d.n)


class Membership(enum.Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


def krylov_min_poly(A, v) -> list[Fraction]:
    """Monic minimal polynomial of v under A (coefficients, highest first)."""
    vecs = [tuple(Fraction(x) for x in v)]
    while True:
        nxt = la.mat_vec(A, vecs[-1])
        sol = la.solve_rational(la.transpose(vecs), nxt)
        if sol is not None:
            # A^k v = sum c_i A^i v  ->  t^k - sum c_i t^i
            return [Fraction(1)] + [-c for c in reversed(sol)]
        vecs.append(nxt)


def _perron_component_vanishes(A, v, alpha: float) -> Optional[bool]:
    """<f_A*, v> == 0 iff alpha is not a root of the A-minimal polynomial of v."""
    p = krylov_min_poly(A, v)
    if len(p) == 1:
        return True
    roots = np.roots([float(c) for c in p])
    dist = float(np.min(np.abs(roots - alpha)))
    if dist > 1e-6 * alpha:
        return True
    return None


def support_membership(d: KatoData, v, max_iter: int = 50, margin: float = 1e-6) -> Membership:
    """Is v in the support of Sigma_A (lattice vectors only)?"""
    v = tuple(int(x) for x in v)
    K = d.kato
    n = d.n
    C0 = Cone.of(standard_basis(n))
    if not any(v):
        return Membership.OUT
    if K.kind is Kind.HOPF:
        c = cone_contains(C0, v)
        return Membership.IN if c is Containment.BOUNDARY else Membership.OUT
    in_tauP = all(x >= 0 for x in v) and all(v[j] == 0 for j in range(n) if j not in K.P)
    if in_tauP:
        return Membership.IN
    # lattice vectors never meet the cone R_{>0} f_A + tau_P, so the union decides
    Ainv = la.inverse_unimodular(d.A)
    w_pos, w_neg = v, v
    for _ in range(max_iter + 1):
        if all(x >= 0 for x in w_pos) or all(x >= 0 for x in w_neg):
            return Membership.IN
        w_pos = la.mat_vec(d.A, w_pos)
        w_neg = la.mat_vec(Ainv, w_neg)
    if K.kind is Kind.PARABOLIC:
        j = [i for i in range(n) if i not in K.P][0]
        return Membership.IN if v[j] > 0 else Membership.OUT
    pd = perron(d.A)
    val = float(np.dot(pd.f_star, v))
    scale = max(1.0, float(np.abs(np.array(v, dtype=float)).max()))
    if abs(val) > margin * scale:
        return Membership.IN if val > 0 else Membership.OUT
    if _perron_component_vanishes(d.A, v, pd.alpha):
        return Membership.OUT
    return Membership.UNKNOWN


def _fmt_idx(js) -> str:
    return "{" + ", ".join(str(j + 1) for j in sorted(js)) + "}"


def germ_string(A, ell=None) -> str:
    n = len(A)
    comps = []
    for i, row in enumerate(A):
        mons = []
        for k, a in enumerate(row):
            if a == 1:
                mons.append(f"z{k + 1}")
            elif a:
                mons.append(f"z{k + 1}^{a}")
        comps.append(f"λ{i + 1} " + " ".join(mons))
    return "F(z) = (" + ", ".join(comps) + ")"


def germ_report(d: KatoData) -> dict:
    K = d.kato
    n = d.n
    Pc = [j for j in range(n) if j not in K.P]
    if Pc:
        inv = " ∩ ".join(f"{{z{j + 1} ≠ 0}}" for j in Pc)
    else:
        inv = f"C^{n}"
    B = tuple(tuple(d.A[i][j] for j in Pc) for i in Pc)
    return {
        "kind": K.kind.value,
        "P": _fmt_idx(K.P),
        "H_infinity_components": _fmt_idx(Pc),
        "Inv(F)": inv,
        "splitting": {
            "torus_factor_dim": len(K.P),
            "B": [list(r) for r in B],
            "W_T(F)": "T_N" if K.kind is Kind.PARABOLIC else
                      (f"T_P x W_T(F') with F' on indices {_fmt_idx(Pc)}" if Pc else "C^n minus 0"),
        },
        "germ": germ_string(d.A),
    }
