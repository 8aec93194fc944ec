"""Simplicial rational cones and fans in Z^n."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Optional, Sequence

from . import linalg as la
from .lp import lp_feasible


class Containment(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    return la.primitive(v)


def standard_basis(n: int) -> list[tuple[int, ...]]:
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


@dataclass(frozen=True, order=True)
class Cone:
    """Simplicial cone on primitive, linearly independent generators (sorted)."""

    generators: tuple[tuple[int, ...], ...]
    ambient_dim: int = field(compare=True)

    @classmethod
    def of(cls, gens: Iterable[Sequence[int]], ambient_dim: Optional[int] = None,
           check: bool = True) -> "Cone":
        gens = [tuple(int(x) for x in g) for g in gens]
        if ambient_dim is None:
            if not gens:
                raise ValueError("ambient dimension needed for the zero cone")
            ambient_dim = len(gens[0])
        if check:
            for g in gens:
                if len(g) != ambient_dim:
                    raise ValueError(f"generator {g} has wrong dimension")
                if not la.is_primitive(g):
                    raise ValueError(f"generator {g} is not primitive")
            if len(set(gens)) != len(gens) or (gens and la.rank(gens) != len(gens)):
                raise ValueError(f"generators {gens} are not linearly independent")
        return cls(tuple(sorted(set(gens))), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.generators)

    def faces(self) -> Iterable["Cone"]:
        g = self.generators
        for k in range(len(g) + 1):
            for sub in itertools.combinations(g, k):
                yield Cone(sub, self.ambient_dim)

    def proper_faces(self) -> Iterable["Cone"]:
        return (f for f in self.faces() if f.dim < self.dim)

    def is_face_of(self, other: "Cone") -> bool:
        return set(self.generators) <= set(other.generators)

    def transform(self, M: Sequence[Sequence[int]]) -> "Cone":
        """Image under a unimodular matrix (keeps generators primitive)."""
        return Cone(tuple(sorted(la.mat_vec(M, g) for g in self.generators)), self.ambient_dim)

    def __repr__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def cone_regular(C: Cone) -> bool:
    if C.dim == 0:
        return True
    G = la.transpose(C.generators)
    return all(d == 1 for d in la.snf(G).invariant_factors)


def multiplicity(C: Cone) -> int:
    if C.dim == 0:
        return 1
    prod = 1
    for d in la.snf(la.transpose(C.generators)).invariant_factors:
        prod *= d
    return prod


def cone_coordinates(C: Cone, v: Sequence) -> Optional[tuple[Fraction, ...]]:
    if C.dim == 0:
        return () if all(x == 0 for x in v) else None
    return la.solve_rational(la.transpose(C.generators), v)


def cone_contains(C: Cone, v: Sequence) -> Containment:
    coords = cone_coordinates(C, v)
    if coords is None or any(c < 0 for c in coords):
        return Containment.OUTSIDE
    if all(c > 0 for c in coords):
        return Containment.INTERIOR
    return Containment.BOUNDARY


def _quick_separation(C1: Cone, C2: Cone, common: set) -> Optional[bool]:
    """Cheap exact answer when the common face is a facet of both cones."""
    r1 = [g for g in C1.generators if g not in common]
    r2 = [g for g in C2.generators if g not in common]
    n = C1.ambient_dim
    if not (C1.dim == C2.dim == n and len(r1) == 1 and len(r2) == 1):
        return None
    # normal of the common facet: the unique (up to scale) functional vanishing on it
    ker = la.nullspace_rational(sorted(common)) if common else None
    if ker is None or len(ker) != 1:
        return None
    h = ker[0]
    a, b = la.dot(h, r1[0]), la.dot(h, r2[0])
    return (a > 0 > b) or (a < 0 < b)


@lru_cache(maxsize=65536)
def _dual_basis(C: Cone):
    """Rational covectors d_i with d_i(g_j) = delta_ij on the generators of C."""
    G = C.generators
    n = C.ambient_dim
    # extend to a basis of Q^n with standard vectors, then invert
    ext = list(G)
    for e in standard_basis(n):
        if len(ext) == n:
            break
        if la.rank(ext + [e]) == len(ext) + 1:
            ext.append(e)
    inv = la.inverse_rational(la.transpose(ext))
    return inv[:len(G)]


def _facet_normals(C: Cone, common: set) -> list:
    """Inner normals of the facets of C that contain the common face, for full cones."""
    if C.dim != C.ambient_dim:
        return []
    d = _dual_basis(C)
    return [d[i] for i, g in enumerate(C.generators) if g not in common]


def _separates(h, common, rest1, rest2) -> bool:
    return (all(la.dot(h, g) == 0 for g in common) and all(la.dot(h, g) > 0 for g in rest1)
            and all(la.dot(h, g) < 0 for g in rest2))


def cones_compatible(C1: Cone, C2: Cone) -> bool:
    """True iff C1 and C2 meet in their common face (the cone on shared generators)."""
    if C1.ambient_dim != C2.ambient_dim:
        raise ValueError("cones live in different lattices")
    if C1 == C2:
        return True
    common = set(C1.generators) & set(C2.generators)
    quick = _quick_separation(C1, C2, common)
    if quick is not None:
        return quick
    rest1 = [g for g in C1.generators if g not in common]
    rest2 = [g for g in C2.generators if g not in common]
    d1 = _dual_basis(C1)
    d2 = _dual_basis(C2)
    h1 = [sum(d1[i][k] for i, g in enumerate(C1.generators) if g in rest1)
          for k in range(C1.ambient_dim)]
    h2 = [sum(d2[i][k] for i, g in enumerate(C2.generators) if g in rest2)
          for k in range(C1.ambient_dim)]
    for h in (h1, [-x for x in h2], [a - b for a, b in zip(h1, h2)]):
        if _separates(h, common, rest1, rest2):
            return True
    # weak separators: inner facet normals through the common face, tilted by h1 or -h2
    for w in _facet_normals(C1, common):
        if all(la.dot(w, g) < 0 for g in rest2):
            N = max((Fraction(la.dot(h1, g)) / -la.dot(w, g) for g in rest2), default=0)
            h = [(N + 1) * a + b for a, b in zip(w, h1)]
            if _separates(h, common, rest1, rest2):
                return True
    for w in _facet_normals(C2, common):
        if all(la.dot(w, g) < 0 for g in rest1):
            N = max((Fraction(la.dot(h2, g)) / -la.dot(w, g) for g in rest1), default=0)
            h = [-((N + 1) * a + b) for a, b in zip(w, h2)]
            if _separates(h, common, rest1, rest2):
                return True
    eqs = [(g, 0) for g in sorted(common)]
    ineqs = [(g, 1) for g in rest1]
    ineqs += [(tuple(-x for x in g), 1) for g in rest2]
    return lp_feasible(eqs, ineqs, nvars=C1.ambient_dim) is not None


@dataclass(frozen=True)
class FanReport:
    valid: bool
    reason: str
    counts: tuple[int, ...]
    regular: bool
    irregular_cones: tuple[Cone, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class Fan:
    """A simplicial fan, stored by its maximal cones."""

    ambient_dim: int
    maximal_cones: frozenset

    @classmethod
    def from_cones(cls, cones: Iterable[Cone], ambient_dim: Optional[int] = None) -> "Fan":
        cones = set(cones)
        if ambient_dim is None:
            if not cones:
                raise ValueError("ambient dimension needed for an empty fan")
            ambient_dim = next(iter(cones)).ambient_dim
        gensets = {c: set(c.generators) for c in cones}
        maximal = [c for c in cones
                   if not any(d != c and gensets[c] < gensets[d] for d in cones)]
        return cls(ambient_dim, frozenset(maximal))

    @classmethod
    def from_rays(cls, max_cones: Iterable[Iterable[Sequence[int]]], ambient_dim=None) -> "Fan":
        return cls.from_cones([Cone.of(c, ambient_dim) for c in max_cones], ambient_dim)

    @cached_property
    def sorted_cones(self) -> tuple[Cone, ...]:
        return tuple(sorted(self.maximal_cones))

    @cached_property
    def all_cones(self) -> frozenset:
        out = set()
        for c in self.maximal_cones:
            out.update(c.faces())
        if not out:
            out.add(Cone((), self.ambient_dim))
        return frozenset(out)

    def cones_of_dim(self, k: int) -> list[Cone]:
        return sorted(c for c in self.all_cones if c.dim == k)

    @cached_property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({g for c in self.maximal_cones for g in c.generators}))

    @cached_property
    def counts(self) -> tuple[int, ...]:
        a = [0] * (self.ambient_dim + 1)
        for c in self.all_cones:
            a[c.dim] += 1
        return tuple(a)

    def contains_cone(self, C: Cone) -> bool:
        return C in self.all_cones

    def transform(self, M) -> "Fan":
        return Fan(self.ambient_dim, frozenset(c.transform(M) for c in self.maximal_cones))

    def is_pure(self) -> bool:
        return len({c.dim for c in self.maximal_cones}) <= 1

    def __repr__(self) -> str:
        return f"Fan(dim={self.ambient_dim}, cones={list(self.sorted_cones)})"


def orthant_fan(n: int) -> Fan:
    """The fan of the positive orthant C_0 with all its faces."""
    return Fan.from_cones([Cone.of(standard_basis(n))])


def fan_validate(F: Fan) -> FanReport:
    n = F.ambient_dim
    cones = F.sorted_cones
    for c in cones:
        for g in c.generators:
            if len(g) != n:
                return FanReport(False, f"generator {g} of {c} has wrong dimension", (), False)
            if not la.is_primitive(g):
                return FanReport(False, f"generator {g} of {c} is not primitive", (), False)
        if c.generators and la.rank(c.generators) != c.dim:
            return FanReport(False, f"cone {c} is not simplicial", (), False)
    for c1, c2 in itertools.combinations(cones, 2):
        if not cones_compatible(c1, c2):
            return FanReport(False, f"cones {c1} and {c2} overlap improperly", F.counts, False)
    irregular = tuple(c for c in cones if not cone_regular(c))
    return FanReport(True, "ok", F.counts, not irregular, irregular)


def _check_primitive(v):
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("zero vector")
    if not la.is_primitive(v):
        raise ValueError(f"{v} is not primitive")
    return v


def star_subdivide(F: Fan, v: Sequence[int]) -> Fan:
    """Stellar subdivision of F at the primitive vector v."""
    v = _check_primitive(v)
    if v in F.rays:
        return F
    new = []
    hit = False
    for c in F.maximal_cones:
        coords = cone_coordinates(c, v)
        if coords is None or any(x < 0 for x in coords):
            new.append(c)
            continue
        hit = True
        for i, x in enumerate(coords):
            if x > 0:
                gens = list(c.generators)
                gens[i] = v
                new.append(Cone(tuple(sorted(gens)), F.ambient_dim))
    if not hit:
        raise ValueError(f"{v} lies outside the support of the fan")
    return Fan.from_cones(new, F.ambient_dim)


class ContractionError(ValueError):
    pass


def remove_ray(F: Fan, v: Sequence[int], restore: Optional[Iterable[Sequence[int]]] = None) -> Fan:
    """Undo a stellar subdivision: remove the ray v and re-cone its star.

    The star of v must be the stellar subdivision at v of a cone S spanned by
    neighbouring rays.  When several S are possible, `restore` selects one;
    otherwise the lexicographically largest candidate is used.
    """
    v = tuple(int(x) for x in v)
    if v not in F.rays:
        raise ContractionError(f"{v} is not a ray of the fan")
    star = [c for c in F.maximal_cones if v in c.generators]
    rest = [c for c in F.maximal_cones if v not in c.generators]
    link_rays = sorted({g for c in star for g in c.generators if g != v})
    candidates = []
    for k in range(1, len(link_rays) + 1):
        for S in itertools.combinations(link_rays, k):
            if la.rank(S) != len(S):
                continue
            coords = la.solve_rational(la.transpose(S), v)
            if coords is None or any(x <= 0 for x in coords):
                continue
            restored = set()
            ok = True
            for c in star:
                L = set(c.generators) - {v}
                missing = [s for s in S if s not in L]
                if len(missing) != 1:
                    ok = False
                    break
                gens = L | {missing[0]}
                if la.rank(sorted(gens)) != len(gens):
                    ok = False
                    break
                restored.add(Cone(tuple(sorted(gens)), F.ambient_dim))
            if not ok:
                continue
            cand = Fan.from_cones(rest + sorted(restored), F.ambient_dim)
            if v in cand.rays:
                continue
            try:
                if star_subdivide(cand, v) != F:
                    continue
            except ValueError:
                continue
            candidates.append((tuple(sorted(S)), cand))
    if restore is not None:
        want = tuple(sorted(tuple(int(x) for x in g) for g in restore))
        candidates = [c for c in candidates if c[0] == want]
    if not candidates:
        raise ContractionError(f"removing {v} does not leave a simplicial fan on the same support")
    candidates.sort(key=lambda t: t[0])
    result = candidates[-1][1]
    rep = fan_validate(result)
    if not rep.valid:
        raise ContractionError(rep.reason)
    return result


class RegularizationError(RuntimeError):
    pass


def _parallelepiped_point(C: Cone) -> tuple[int, ...]:
    """Nonzero lattice point sum t_i g_i, 0 <= t_i < 1, with smallest (sum t, t).

    The fractional coordinates of lattice points in span(C) form a finite group;
    it is generated by a basis of the saturated lattice, so a closure search
    enumerates it.
    """
    G = list(C.generators)
    n = C.ambient_dim
    Y = la.int_kernel(G)
    basis = la.int_kernel(Y) if Y else standard_basis(n)
    GT = la.transpose(G)

    def frac(x):
        t = la.solve_rational(GT, x)
        return tuple(a - (a.numerator // a.denominator) for a in t)

    gens = [frac(b) for b in basis]
    zero = tuple(Fraction(0) for _ in G)
    seen = {zero}
    todo = [zero]
    while todo:
        t = todo.pop()
        for g in gens:
            u = tuple((a + b) % 1 for a, b in zip(t, g))
            if u not in seen:
                seen.add(u)
                todo.append(u)
    seen.discard(zero)
    t = min(seen, key=lambda t: (sum(t), t))
    return tuple(int(sum(ti * g[i] for ti, g in zip(t, G))) for i in range(n))


def regularize(F: Fan, max_steps: int = 10_000) -> Fan:
    """Star-subdivide minimal non-regular cones until the fan is regular.

    The primitive barycenter is used when it lowers the multiplicity, i.e. when
    the sum of generators is divisible; otherwise the smallest point of the
    fundamental parallelepiped is used, which always lowers it.
    """
    steps = 0
    while True:
        bad = [c for c in F.all_cones if not cone_regular(c)]
        if not bad:
            return F
        if steps >= max_steps:
            raise RegularizationError(f"no regular fan after {max_steps} subdivisions")
        c = min(bad, key=lambda c: (c.dim, c.generators))
        total = tuple(sum(col) for col in zip(*c.generators))
        v = la.primitive(total) if la.content(total) > 1 else _parallelepiped_point(c)
        F = star_subdivide(F, v)
        steps += 1


def _relative_volume(coarse: Cone, fine: Cone) -> Fraction:
    """Normalized volume of fine's cross-section inside coarse (coordinates sum to 1)."""
    G = la.transpose(coarse.generators)
    W = []
    for g in fine.generators:
        w = la.solve_rational(G, g)
        s = sum(w)
        W.append([x / s for x in w])
    d = la.det(W)
    return abs(Fraction(d))


def refines(fine: Fan, coarse: Fan) -> bool:
    """Supports agree and each cone of `fine` lies in a cone of `coarse`."""
    if fine.ambient_dim != coarse.ambient_dim:
        return False
    home: dict = {}
    for c in fine.maximal_cones:
        owner = None
        for d in coarse.sorted_cones:
            if all(cone_contains(d, g) != Containment.OUTSIDE for g in c.generators):
                owner = d
                break
        if owner is None:
            return False
        home.setdefault(owner, []).append(c)
    for d in coarse.maximal_cones:
        if d.dim == 0:
            continue
        pieces = [c for c in fine.maximal_cones if c.dim == d.dim
                  and all(cone_contains(d, g) != Containment.OUTSIDE for g in c.generators)]
        if sum(_relative_volume(d, c) for c in pieces) != 1:
            return False
    return True


def is_complete(F: Fan) -> bool:
    n = F.ambient_dim
    if not F.is_pure() or any(c.dim != n for c in F.maximal_cones):
        raise ValueError("is_complete needs a pure full-dimensional fan")
    facets: dict = {}
    for c in F.maximal_cones:
        for g in c.generators:
            f = tuple(x for x in c.generators if x != g)
            facets.setdefault(f, []).append(c)
    if any(len(v) != 2 for v in facets.values()):
        return False
    cones = F.sorted_cones
    seen = {cones[0]}
    todo = [cones[0]]
    while todo:
        c = todo.pop()
        for g in c.generators:
            f = tuple(x for x in c.generators if x != g)
            for d in facets[f]:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
    return len(seen) == len(cones)


@dataclass(frozen=True)
class SupportFunction:
    """Piecewise-linear strictly convex function: ray values and per-cone slopes."""

    values: dict
    slopes: dict


def _walls(F: Fan):
    walls: dict = {}
    for c in F.sorted_cones:
        for g in c.generators:
            f = tuple(x for x in c.generators if x != g)
            walls.setdefault(f, []).append((c, g))
    return walls


def verify_support_function(F: Fan, sf: SupportFunction) -> bool:
    """Check the witness conditions exactly (linearity on cones, margin 1 off them)."""
    for c in F.maximal_cones:
        m = sf.slopes[c]
        for g in c.generators:
            if la.dot(m, g) != sf.values[g]:
                return False
        for r in F.rays:
            if r not in c.generators and la.dot(m, r) > sf.values[r] - 1:
                return False
    return True


def is_projective(F: Fan) -> Optional[SupportFunction]:
    """Search for a strictly convex support function; None means not projective."""
    if not is_complete(F):
        raise ValueError("is_projective needs a complete fan")
    rays = F.rays
    idx = {r: i for i, r in enumerate(rays)}
    nr = len(rays)
    ineqs = []
    for f, pair in _walls(F).items():
        (c1, g1), (c2, g2) = pair
        # g2 = -a g1 + sum_h b_h h over the facet; convexity: a h(g1) + h(g2) - sum b_h h(h) >= 1
        G = la.transpose(list(f) + [g1])
        coords = la.solve_rational(G, g2)
        row = [Fraction(0)] * nr
        a = -coords[-1]
        row[idx[g1]] += a
        row[idx[g2]] += 1
        for h, b in zip(f, coords[:-1]):
            row[idx[h]] -= b
        ineqs.append((row, 1))
    sol = lp_feasible([], ineqs, nvars=nr)
    if sol is None:
        return None
    values = {r: sol[idx[r]] for r in rays}
    slopes = {}
    for c in F.maximal_cones:
        slopes[c] = la.solve_rational(c.generators, [values[g] for g in c.generators])
    # rescale so every off-cone gap is at least 1
    gap = min(values[r] - la.dot(slopes[c], r)
              for c in F.maximal_cones for r in rays if r not in c.generators)
    if gap <= 0:
        return None
    s = 1 / gap if gap < 1 else Fraction(1)
    values = {r: x * s for r, x in values.items()}
    slopes = {c: tuple(x * s for x in m) for c, m in slopes.items()}
    sf = SupportFunction(values, slopes)
    if not verify_support_function(F, sf):  # pragma: no cover - defensive
        raise AssertionError("support function failed re-verification")
    return sf


def complete_to_Pn(F: Fan) -> Fan:
    """Glue the cones <e_0> + tau_J (J proper) onto a refinement of C_0."""
    n = F.ambient_dim
    if not refines(F, orthant_fan(n)):
        raise ValueError("complete_to_Pn needs a refinement of the positive orthant")
    e0 = tuple(-1 for _ in range(n))
    basis = standard_basis(n)
    extra = [Cone.of([e0] + [basis[j] for j in range(n) if j != i]) for i in range(n)]
    return Fan.from_cones(list(F.maximal_cones) + extra, n)


def projective_space_fan(n: int) -> Fan:
    return complete_to_Pn(orthant_fan(n))


def completed_counts(a: Sequence[int]) -> tuple[int, ...]:
    n = len(a) - 1
    return tuple([a[0]] + [a[j] + comb(n, j - 1) for j in range(1, n + 1)])
