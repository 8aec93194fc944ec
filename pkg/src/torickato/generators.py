"""Random toric modifications and Kato matrices for property tests."""
from __future__ import annotations

import random
from typing import Optional

from . import linalg as la
from .fans import Fan, orthant_fan, star_subdivide
from .kato import GaussQ, KatoData, is_kato_matrix


def random_star_script(rng: random.Random, n: int, steps: int) -> tuple[Fan, list[tuple[int, ...]]]:
    """Apply `steps` star subdivisions at sums of generators of random cones.

    Summing the generators of a regular cone gives a primitive vector, so the
    result stays regular.  Only cones meeting the open orthant are used.
    """
    F = orthant_fan(n)
    rays = []
    for _ in range(steps):
        sums = {c: tuple(sum(g[i] for g in c.generators) for i in range(n))
                for c in F.all_cones if c.dim >= 2}
        # new rays of a modification over the origin must be strictly positive
        cones = sorted(c for c, v in sums.items() if all(x > 0 for x in v))
        v = sums[rng.choice(cones)]
        F = star_subdivide(F, v)
        rays.append(v)
    return F, rays


def random_kato_data(rng: random.Random, n: int, steps: Optional[int] = None,
                     with_ell: bool = False) -> KatoData:
    """Random star-script modification with a random maximal cone as tau_A."""
    if steps is None:
        steps = rng.randint(1, 6)
    F, _ = random_star_script(rng, n, steps)
    tau = rng.choice(sorted(F.maximal_cones))
    cols = list(tau.generators)
    rng.shuffle(cols)
    A = la.from_columns(cols)
    ell = None
    if with_ell:
        # positive imaginary parts satisfy the contraction criterion
        ell = tuple(GaussQ.of(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n))
    return KatoData(F, A, ell)


def random_kato_matrix(rng: random.Random, n: int, max_entry: int = 5,
                       p_standard: float = 0.35, tries: int = 100_000) -> tuple:
    """Rejection sampling of matrices with positive or standard columns and det = +-1."""
    for _ in range(tries):
        cols = []
        for _ in range(n):
            if rng.random() < p_standard:
                j = rng.randrange(n)
                cols.append(tuple(int(i == j) for i in range(n)))
            else:
                cols.append(tuple(rng.randint(1, max_entry) for _ in range(n)))
        A = la.from_columns(cols)
        if is_kato_matrix(A):
            return A
    raise RuntimeError("no Kato matrix found; increase tries")
