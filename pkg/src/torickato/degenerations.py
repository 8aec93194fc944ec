"""Nakamura and isotrivial degeneration fans in N + Ze = Z^(n+1)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from . import linalg as la
from .fans import Cone, Fan, cone_regular, fan_validate, is_complete, standard_basis
from .kato import KatoData, Kind


@dataclass(frozen=True)
class DegenerationFan:
    kind: str  # "Nakamura" or "Isotrivial"
    Atilde: tuple
    truncation: Fan
    central_fiber: Fan
    window: int
    u: Optional[tuple] = None
    v: Optional[tuple] = None
    smooth: Optional[bool] = None


def _lift(v, last=0):
    return tuple(v) + (last,)


def _boundary_facets(n: int) -> list[list[tuple]]:
    basis = standard_basis(n)
    return [[basis[i] for i in range(n) if i != j] for j in range(n)]


def _sigma0_maximal(d: KatoData) -> list[Cone]:
    return sorted(c for c in d.fan.maximal_cones if c != d.tau)


def _tilde_zero(d: KatoData, nu0, nu_m1) -> list[Cone]:
    n1 = d.n + 1
    cones = [Cone.of([_lift(g) for g in c.generators] + [nu0], n1) for c in _sigma0_maximal(d)]
    cones += [Cone.of([_lift(g) for g in f] + [nu0, nu_m1], n1) for f in _boundary_facets(d.n)]
    return cones


def _window(cones, At, window: int) -> Fan:
    out = set()
    for k in range(-window, window + 1):
        M = la.mat_pow(At, k)
        out.update(c.transform(M) for c in cones)
    return Fan.from_cones(out, len(At))


def _central(d: KatoData, w) -> Fan:
    """Sigma_0 plus <Aw> + A tau_J and <-w> + tau_J over the facets tau_J of C_0."""
    Aw = la.mat_vec(d.A, w)
    cones = list(_sigma0_maximal(d))
    for f in _boundary_facets(d.n):
        cones.append(Cone.of([Aw] + [la.mat_vec(d.A, g) for g in f], d.n))
        cones.append(Cone.of([tuple(-x for x in w)] + f, d.n))
    return Fan.from_cones(cones, d.n)


def nakamura_fan(d: KatoData, window: int = 3) -> DegenerationFan:
    n = d.n
    c = tuple(1 for _ in range(n))
    Ac = la.mat_vec(d.A, c)
    At = tuple(tuple(d.A[i]) + (Ac[i],) for i in range(n)) + (tuple([0] * n + [1]),)
    e = _lift([0] * n, 1)
    nu_m1 = _lift([-x for x in c], 1)
    trunc = _window(_tilde_zero(d, e, nu_m1), At, window)
    return DegenerationFan("Nakamura", At, trunc, _central(d, c), window)


def image_content(A) -> int:
    """gcd of the entries of A - id; the image lattice lies in content * Z^n."""
    return la.content([x for r in la.mat_sub(A, la.identity(len(A))) for x in r])


def in_image(A, u) -> bool:
    return la.solve_diophantine(la.mat_sub(A, la.identity(len(A))), u) is not None


@dataclass(frozen=True)
class UResult:
    u: Optional[tuple]
    certificate: Optional[str] = None
    witness: Optional[tuple] = None  # (A^l - id)(e_j + e_k), possibly not primitive

    def __bool__(self) -> bool:
        return self.u is not None


def lemma_witness(d: KatoData) -> Optional[tuple]:
    """w = (A^l - id)(e_j + e_k) in Im(id - A) and Int C_0, for j != k outside P(A)."""
    n = d.n
    Pc = [i for i in range(n) if i not in d.kato.P]
    if len(Pc) < 2:
        return None
    j, k = Pc[0], Pc[1]
    Al = la.identity(n)
    for _ in range(d.kato.m0 * d.kato.order + n + 1):
        Al = la.mat_mul(Al, d.A)
        w = tuple(Al[i][j] + Al[i][k] - (i == j) - (i == k) for i in range(n))
        if all(x > 0 for x in w):
            return w
    return None


def isotrivial_u(d: KatoData, bound: int = 10) -> UResult:
    """A primitive u in Im(id - A) meeting the interior of C_0, when one exists."""
    n = d.n
    K = d.kato
    if K.kind is Kind.HOPF:
        return UResult(None, "the functional e_1* + ... + e_n* vanishes on Im(id − A) "
                             "and is positive on Int C_0")
    if K.kind is Kind.PARABOLIC:
        j = [i for i in range(n) if i not in K.P][0]
        return UResult(None, f"the functional e_{j + 1}* vanishes on Im(id − A) "
                             f"and is positive on Int C_0")
    w = lemma_witness(d)
    g = image_content(d.A)
    if g > 1:
        return UResult(None, f"Im(id − A) lies in {g}·Z^n, so it has no primitive vectors", w)
    c = tuple(1 for _ in range(n))
    if in_image(d.A, c):
        return UResult(c, None, w)
    Pc = [i for i in range(n) if i not in K.P]
    for j, k in itertools.combinations(Pc, 2):
        for l in range(1, K.m0 * K.order + n + 2):
            Al = la.mat_pow(d.A, l)
            cand = tuple(Al[i][j] + Al[i][k] - (i == j) - (i == k) for i in range(n))
            if all(x > 0 for x in cand):
                u = la.primitive(cand)
                if in_image(d.A, u):
                    return UResult(u, None, w)
    cands = sorted(itertools.product(range(1, bound + 1), repeat=n), key=lambda v: (sum(v), v))
    for u in cands:
        if la.is_primitive(u) and in_image(d.A, u):
            return UResult(tuple(u), None, w)
    return UResult(None, f"no primitive element found with entries ≤ {bound}", w)


def choose_v(A, u, box: int = 6) -> tuple:
    """Integer v with (A - id) v = A u, minimal sup-norm then lexicographic."""
    n = len(A)
    sol = la.solve_diophantine(la.mat_sub(A, la.identity(n)), la.mat_vec(A, u))
    if sol is None:
        raise ValueError("A u is not in the image of A − id")
    v0, ker = sol
    best = None
    for coeffs in itertools.product(range(-box, box + 1), repeat=len(ker)):
        v = tuple(v0[i] + sum(c * k[i] for c, k in zip(coeffs, ker)) for i in range(n))
        key = (max(abs(x) for x in v), v)
        if best is None or key < best:
            best = key
    return best[1]


def isotrivial_fan(d: KatoData, u, window: int = 3) -> DegenerationFan:
    n = d.n
    u = tuple(int(x) for x in u)
    if len(u) != n or not all(x > 0 for x in u):
        raise ValueError("u must lie in the interior of C_0")
    if not la.is_primitive(u):
        raise ValueError("u must be primitive")
    if not in_image(d.A, u):
        raise ValueError("u is not in the image of id − A")
    v = choose_v(d.A, u)
    At = tuple(tuple(d.A[i]) + (0,) for i in range(n)) + (tuple([0] * n + [1]),)
    nu0 = _lift(v, 1)
    nu_m1 = _lift(la.mat_vec(la.inverse_unimodular(d.A), v), 1)
    trunc = _window(_tilde_zero(d, nu0, nu_m1), At, window)
    central = _central(d, u)
    smooth = u == tuple(1 for _ in range(n))
    regular = all(cone_regular(c) for c in central.maximal_cones)
    if smooth != regular:
        raise AssertionError(f"smoothness flag {smooth} disagrees with cone regularity {regular}")
    return DegenerationFan("Isotrivial", At, trunc, central, window, u, v, smooth)


def check_degeneration(D: DegenerationFan) -> dict:
    """Structural checks: validity, regularity of the window, equivariance, completeness."""
    rep = fan_validate(D.truncation)
    At = D.Atilde
    nxt_cones = set()
    n1 = len(At)
    # cones of the next window, built by translating the current one
    for k in (-1, 1):
        M = la.mat_pow(At, k)
        nxt_cones.update(c.transform(M) for c in D.truncation.maximal_cones)
    nxt_cones.update(D.truncation.maximal_cones)
    bigger = Fan.from_cones(nxt_cones, n1)
    image = D.truncation.transform(At)
    equivariant = all(c in bigger.all_cones for c in image.maximal_cones)
    return {
        "valid": rep.valid,
        "regular": rep.regular,
        "det_Atilde": la.det(At),
        "equivariant": equivariant,
        "central_complete": is_complete(D.central_fiber),
        "central_regular": all(cone_regular(c) for c in D.central_fiber.maximal_cones),
    }
