import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torickato import linalg as la
from torickato.degenerations import (check_degeneration, choose_v, image_content, in_image,
                                     isotrivial_fan, isotrivial_u, lemma_witness, nakamura_fan)
from torickato.document import load_fixture
from torickato.fans import Cone, cone_regular, fan_validate, is_complete, orthant_fan, star_subdivide
from torickato.generators import random_kato_data
from torickato.kato import KatoData, Kind, make_data, validate_kato_data

seeds = st.integers(0, 10**9)


def test_nakamura_surface():
    d = load_fixture("inoue_hirzebruch")
    D = nakamura_fan(d, window=2)
    assert D.Atilde == ((1, 1, 2), (1, 2, 3), (0, 0, 1))
    assert la.det(D.Atilde) == 1
    S = D.central_fiber
    assert len(S.maximal_cones) == 6 and is_complete(S)
    for gens in [[(2, 3), (1, 2)], [(2, 3), (1, 1)], [(-1, -1), (0, 1)], [(-1, -1), (1, 0)]]:
        assert Cone.of(gens) in S.maximal_cones
    chk = check_degeneration(D)
    assert all(chk[k] for k in ("valid", "regular", "equivariant", "central_complete", "central_regular"))


def test_window_zero_is_regular():
    D = nakamura_fan(load_fixture("fig2"), window=0)
    rep = fan_validate(D.truncation)
    assert rep.valid and rep.regular


def test_isotrivial_u_examples():
    assert isotrivial_u(load_fixture("inoue_hirzebruch")).u == (1, 1)
    assert isotrivial_u(load_fixture("fig2")).u == (1, 1, 1)
    r = isotrivial_u(load_fixture("inoue_a"))
    assert not r and "e_2*" in r.certificate
    r = isotrivial_u(load_fixture("hopf_3cycle"))
    assert not r and r.certificate


def test_isotrivial_u_equals_c_matches_nakamura():
    d = load_fixture("inoue_hirzebruch")
    D = isotrivial_fan(d, (1, 1))
    assert D.smooth and D.central_fiber == nakamura_fan(d).central_fiber


def test_non_c_choice_is_singular():
    d = make_data(load_fixture("inoue_hirzebruch").fan, [(1, 1), (1, 2)])
    assert in_image(d.A, (2, 1))
    D = isotrivial_fan(d, (2, 1))
    assert not D.smooth
    assert not all(cone_regular(c) for c in D.central_fiber.maximal_cones)


def _data_with_matrix(A):
    F = orthant_fan(2)
    for v in [(1, 1), (2, 1), (3, 1), (5, 2)]:
        F = star_subdivide(F, v)
    d = KatoData(F, A)
    assert validate_kato_data(d).valid
    return d


def test_no_primitive_u_when_content_exceeds_one():
    # hyperbolic, yet every entry of A - id is even
    A = ((5, 2), (2, 1))
    assert image_content(A) == 2
    r = isotrivial_u(_data_with_matrix(A))
    assert not r and "2·Z^n" in r.certificate
    # the constructive lattice point still exists, it is just not primitive
    w = r.witness
    assert w is not None and all(x > 0 for x in w) and in_image(A, w)
    assert la.content(w) > 1


def test_invalid_u_rejected():
    d = load_fixture("inoue_hirzebruch")
    with pytest.raises(ValueError):
        isotrivial_fan(d, (2, 2))
    with pytest.raises(ValueError):
        isotrivial_fan(d, (1, 0))
    with pytest.raises(ValueError):
        isotrivial_fan(load_fixture("inoue_a"), (1, 1))


def test_choose_v_solves_system():
    A = load_fixture("fig2").A
    u = (1, 1, 1)
    v = choose_v(A, u)
    assert la.mat_vec(la.mat_sub(A, la.identity(3)), v) == la.mat_vec(A, u)


@given(seeds, st.sampled_from([2, 3]))
@settings(max_examples=12, deadline=None)
def test_random_degenerations(seed, n):
    d = random_kato_data(random.Random(seed), n)
    if d.kind is not Kind.HYPERBOLIC:
        assert not isotrivial_u(d)
        return
    w = lemma_witness(d)
    assert w is not None and all(x > 0 for x in w) and in_image(d.A, w)
    D = nakamura_fan(d, window=1)
    chk = check_degeneration(D)
    assert chk["valid"] and chk["equivariant"] and chk["central_complete"]
    assert abs(chk["det_Atilde"]) == abs(la.det(d.A))
    r = isotrivial_u(d)
    if r:
        Du = isotrivial_fan(d, r.u, window=1)
        regular = all(cone_regular(c) for c in Du.central_fiber.maximal_cones)
        assert Du.smooth == regular == (r.u == (1,) * n)
        assert is_complete(Du.central_fiber)
