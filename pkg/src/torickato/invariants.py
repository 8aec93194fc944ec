"""Topological and analytic invariants computed from toric Kato data."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from . import linalg as la
from .fans import Cone, cone_regular, complete_to_Pn, is_projective, standard_basis
from .kato import KatoData, Kind


class HodgeStatus(enum.Enum):
    EXACT = "exact"
    CONDITIONAL_PARABOLIC = "conditional-parabolic"
    NOT_COMPUTED = "not-computed"


def betti_from_counts(a) -> tuple[int, ...]:
    n = len(a) - 1
    b = [0] * (2 * n + 1)
    for j in range(1, n):
        b[2 * j] = -1 + sum((-1) ** (s - j) * comb(s, j) * (a[n - s] + comb(n, s + 1))
                            for s in range(j, n + 1))
    for k in (0, 1, 2 * n - 1, 2 * n):
        b[k] = 1
    return tuple(b)


def betti(d: KatoData) -> tuple[int, ...]:
    return betti_from_counts(d.fan.counts)


def euler(d: KatoData) -> int:
    return d.fan.counts[-1] - 1


def sharp_D(d: KatoData) -> int:
    return d.fan.counts[1] - d.n


def sharp_DT(d: KatoData) -> int:
    return sharp_D(d) + len(d.kato.cycles)


@dataclass(frozen=True)
class HodgeTable:
    status: HodgeStatus
    values: dict = field(default_factory=dict)
    note: str = ""


def _is_single_cycle(d: KatoData) -> bool:
    cyc = d.kato.cycles
    return len(cyc) == 1 and len(cyc[0]) == d.n


def hodge(d: KatoData) -> HodgeTable:
    n = d.n
    kind = d.kind
    if kind is Kind.HOPF and not _is_single_cycle(d):
        return HodgeTable(HodgeStatus.NOT_COMPUTED, {},
                          "Hopf data whose permutation is not a single n-cycle")
    D = sharp_D(d)
    vals = {(0, 0): 1, (0, 1): 1, (1, 1): D}
    for p in range(2, n + 1):
        vals[(0, p)] = 0
    for p in range(1, n + 1):
        vals[(p, 0)] = 0
    for p in range(2, n + 1):
        vals[(1, p)] = 0
    if kind is Kind.PARABOLIC:
        return HodgeTable(HodgeStatus.CONDITIONAL_PARABOLIC, vals,
                          "valid for parameters close enough to the origin")
    note = "primary Hopf; #D = 0" if kind is Kind.HOPF else ""
    return HodgeTable(HodgeStatus.EXACT, vals, note)


def log_sheaf_cohomology(d: KatoData) -> dict:
    n = d.n
    AmI = la.mat_sub(d.A, la.identity(n))
    r = la.rank(AmI)
    rt = la.rank(la.transpose(AmI))
    theta = {0: n - r}
    omega = {0: n - rt}
    if d.kind is Kind.HYPERBOLIC:
        theta.update({1: n - r})
        omega.update({1: n - rt})
        for i in range(2, n + 1):
            theta[i] = 0
            omega[i] = 0
    return {"Theta(-log D_T)": theta, "Omega1(log D_T)": omega}


def canonical_report(d: KatoData) -> dict:
    dt = la.det(d.A)
    return {
        "det_A": dt,
        "sharpD": sharp_D(d),
        "sharpDT": sharp_DT(d),
        "statement": "K_X ⊗ L_detA = O(-D_T)",
        "holonomy_of_L": dt,
        "kodaira_dimension": "negative",
    }


def _fundamental_domain(d: KatoData, k: int) -> list[Cone]:
    return sorted(c for c in d.sigma0_cones if c.dim == k)


class _DSU:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)

    def groups(self):
        out: dict = {}
        for x in self.p:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass(frozen=True)
class Census:
    elliptic: int
    rational: int
    depth: int
    flagged: bool = False


def curve_census(d: KatoData, depth: int = 1) -> Census:
    """Gamma-orbits of invariant curves, i.e. of (n-1)-cones of Sigma_A."""
    n = d.n
    order = d.kato.order
    base = _fundamental_domain(d, n - 1)
    window = set()
    for k in range(depth * order + 1):
        Ak = la.mat_pow(d.A, k)
        window.update(c.transform(Ak) for c in base)
    dsu = _DSU(window)
    for c in window:
        img = c.transform(d.A)
        if img in window:
            dsu.union(c, img)
    ell = rat = 0
    for group in dsu.groups():
        rep = min(group)
        invariant = False
        Ak = la.identity(n)
        for _ in range(order * n):
            Ak = la.mat_mul(Ak, d.A)
            if rep.transform(Ak) == rep:
                invariant = True
                break
        if invariant:
            ell += 1
        else:
            rat += 1
    kind = d.kind
    if kind is Kind.HOPF:
        assert rat == 0, "Hopf census found rational curves"
    elif kind is Kind.HYPERBOLIC:
        assert ell == 0, "hyperbolic census found elliptic curves"
    else:
        assert ell == 1, "parabolic census must find exactly one elliptic curve"
    flagged = kind is Kind.HOPF and d.kato.s != {j: j for j in range(n)}
    return Census(ell, rat, depth, flagged)


def _divisor_components(d: KatoData, include_cycles: bool) -> int:
    """Connected components of D (or D_T) from the quotient dual graph."""
    n = d.n
    P = d.kato.P
    std = standard_basis(n)
    excluded = set() if include_cycles else {std[j] for j in P}
    rays = [c.generators[0] for c in _fundamental_domain(d, 1)]
    rays = [r for r in rays if r not in excluded]
    dsu = _DSU(rays)
    rayset = set(rays)
    for r in rays:
        img = la.mat_vec(d.A, r)
        if img in rayset:
            dsu.union(r, img)
    for c in _fundamental_domain(d, 2):
        a, b = c.generators
        if a in rayset and b in rayset:
            dsu.union(a, b)
    return len(dsu.groups())


def divisor_connectivity(d: KatoData) -> dict:
    if d.kind is Kind.HOPF:
        raise ValueError("divisor connectivity is not defined for Hopf data")
    cD = _divisor_components(d, False)
    cDT = _divisor_components(d, True)
    n = d.n
    if n >= 3:
        expected = (1, 1)
    elif d.kind is Kind.PARABOLIC:
        expected = (1, 2)
    else:
        expected = (1, 1) if la.det(d.A) == -1 else (2, 2)
    if (cD, cDT) != expected:
        raise AssertionError(f"dual graph gives {(cD, cDT)} components, expected {expected}")
    return {"D_components": cD, "DT_components": cDT,
            "D_connected": cD == 1, "DT_connected": cDT == 1}


def metric_report(d: KatoData) -> dict:
    lck = is_projective(complete_to_Pn(d.fan)) is not None
    if d.n >= 3 and d.kind is Kind.HYPERBOLIC:
        pluri = "nonexistent"
    else:
        pluri = "unknown/possible"
    return {
        "lcK": lck,
        "balanced": "nonexistent",
        "strongly_gauduchon": "nonexistent",
        "hermitian_symplectic": "nonexistent",
        "pluriclosed": pluri,
    }


@dataclass(frozen=True)
class InvariantReport:
    betti: tuple
    euler: int
    sharpD: int
    sharpDT: int
    hodge: HodgeTable
    log_cohomology: dict
    canonical: dict
    census: Census
    connectivity: Optional[dict]
    metrics: dict

    def as_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "euler": self.euler,
            "sharpD": self.sharpD,
            "sharpDT": self.sharpDT,
            "hodge": {"status": self.hodge.status.value,
                      "values": {f"h{p}{q}": v for (p, q), v in sorted(self.hodge.values.items())},
                      "note": self.hodge.note},
            "log_cohomology": {k: {str(i): v for i, v in dims.items()}
                               for k, dims in self.log_cohomology.items()},
            "canonical": self.canonical,
            "census": {"elliptic": self.census.elliptic, "rational": self.census.rational,
                       "depth": self.census.depth, "flagged": self.census.flagged},
            "connectivity": self.connectivity,
            "metrics": self.metrics,
        }


def invariant_report(d: KatoData, depth: int = 1) -> InvariantReport:
    conn = None if d.kind is Kind.HOPF else divisor_connectivity(d)
    return InvariantReport(betti(d), euler(d), sharp_D(d), sharp_DT(d), hodge(d),
                           log_sheaf_cohomology(d), canonical_report(d),
                           curve_census(d, depth), conn, metric_report(d))


def all_regular(cones) -> bool:
    return all(cone_regular(c) for c in cones)
