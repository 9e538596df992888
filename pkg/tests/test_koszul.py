from itertools import permutations

import pytest
from hypothesis import given, settings

from conftest import complexes, punctured_plane
from skeleta.errors import InputError
from skeleta.koszul import (KoszulSpec, acyclicity_test, build_koszul, koszul_complex, koszul_in_Cn,
                            koszul_sign, koszul_triangle, sgn_comparison)
from skeleta.lincat import build_monomial_category, identity_functor
from skeleta.simplicial import Face, all_subsets, full_simplex
from skeleta.toric import build_B_category, koszul_support_check
from skeleta.twisted import check_mc, is_quasi_iso, is_zero_object


def disjoint_pairs(n):
    return [(I, J) for I in all_subsets(n) for J in all_subsets(n) if I.isdisjoint(J)]


def test_spec_validation():
    with pytest.raises(InputError):
        KoszulSpec(Face.of(1), Face.of(1))
    with pytest.raises(InputError):
        KoszulSpec(Face.of(1, 2), order=(1, 3))
    assert KoszulSpec(Face.of(2, 3), order=(3, 2)).sgn(3) == 1
    with pytest.raises(InputError):
        koszul_complex(2, KoszulSpec(Face.of(3)))


def test_standard_sign_values():
    spec = KoszulSpec(Face.of(1, 2, 3))
    assert koszul_sign(spec, Face(), 2) == 1
    assert koszul_sign(spec, Face.of(1), 2) == -1
    assert koszul_sign(spec, Face.of(1, 2), 3) == 1
    assert koszul_sign(spec, Face.of(2), 1) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_standard_rule_satisfies_mc(n):
    for I, J in disjoint_pairs(n):
        X = koszul_complex(n, KoszulSpec(I, J))
        assert len(X) == 2 ** len(I)
        assert check_mc(X)


def test_literal_rule_fails_mc():
    # the alternative sign convention breaks delta^2 = 0 on a square
    X = koszul_complex(2, KoszulSpec(Face.of(1, 2)), rule="literal")
    assert not check_mc(X)


def test_unknown_rule():
    with pytest.raises(ValueError):
        koszul_sign(KoszulSpec(Face.of(1)), Face(), 1, rule="other")


def test_summand_shifts():
    X = koszul_complex(2, KoszulSpec(Face.of(1, 2)))
    assert X.summands == ((Face(), 2), (Face.of(1), 1), (Face.of(2), 1), (Face.of(1, 2), 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sgn_independence(n):
    F = identity_functor(build_monomial_category(n))
    for I in all_subsets(n):
        for order in permutations(I.vertices):
            assert sgn_comparison(KoszulSpec(I), order, F) is not None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_triangle_in_cn(n):
    F = identity_functor(build_monomial_category(n))
    for I, J in disjoint_pairs(n):
        for k in range(1, n + 1):
            if k in I or k in J:
                continue
            Ff, iso = koszul_triangle(I, J, k, F)
            assert is_quasi_iso(iso)


def test_triangle_in_db():
    K = punctured_plane()
    _, F = build_B_category(K)
    for I, J in disjoint_pairs(2):
        for k in (1, 2):
            if k not in I and k not in J:
                koszul_triangle(I, J, k, F)


def test_koszul_in_cn_never_zero():
    # C_n has no nonfaces to kill: every Koszul complex is nonzero
    for I in all_subsets(3):
        assert not is_zero_object(koszul_in_Cn(3, I), "end")


def test_punctured_plane_acyclicity():
    K = punctured_plane()
    _, F = build_B_category(K)
    assert acyclicity_test(KoszulSpec(Face.of(1, 2)), F)
    assert not acyclicity_test(KoszulSpec(Face.of(1)), F)
    assert not acyclicity_test(KoszulSpec(Face()), F)


def test_full_simplex_nothing_acyclic():
    _, F = build_B_category(full_simplex(3))
    assert not any(acyclicity_test(KoszulSpec(I), F) for I in all_subsets(3))


@given(complexes(max_n=3))
@settings(max_examples=25, deadline=None)
def test_acyclic_iff_nonface(K):
    _, F = build_B_category(K)
    for I in all_subsets(K.n):
        X = build_koszul(KoszulSpec(I), F)
        assert check_mc(X)
        acyc = acyclicity_test(KoszulSpec(I), F)
        assert acyc == (I not in K) == koszul_support_check(K, I)
