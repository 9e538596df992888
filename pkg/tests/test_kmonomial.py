import pytest

from conftest import punctured_plane
from skeleta.errors import GenerationFailure
from skeleta.kmonomial import (KMonomialCandidate, axiom2_triples, candidate_ext_table, check_axiom2, check_axiom3,
                               check_generation, check_notcomp, generation_complex, generator_ext_table,
                               run_all)
from skeleta.lincat import build_monomial_category, identity_functor
from skeleta.posetalg import build_P_K, ext_table_A
from skeleta.simplicial import Face, boundary_of_simplex, discrete, empty_complex, full_simplex
from skeleta.toric import build_B_category, ext_table_B
from skeleta.twisted import check_mc, is_closed

SMALL = [punctured_plane(), full_simplex(2), discrete(3), boundary_of_simplex(3), empty_complex(1),
         full_simplex(1)]


def b_candidate(K):
    D, F = build_B_category(K)
    return KMonomialCandidate(K, D, F, translation="labels")


def a_candidate(K):
    _, F = build_P_K(K)
    return KMonomialCandidate(K, F.target, F)


@pytest.mark.parametrize("K", SMALL, ids=repr)
def test_b_side_passes(K):
    reps = run_all(b_candidate(K))
    assert all(r.passed for r in reps), [r.summary() for r in reps]


@pytest.mark.parametrize("K", SMALL[:4], ids=repr)
def test_a_side_passes(K):
    reps = run_all(a_candidate(K))
    assert all(r.passed for r in reps), [r.summary() for r in reps]


@pytest.mark.parametrize("K", SMALL[:4], ids=repr)
def test_generator_tables_agree(K):
    a, b = a_candidate(K), b_candidate(K)
    assert generator_ext_table(a) == generator_ext_table(b)
    assert candidate_ext_table(a) == ext_table_A(K)
    assert candidate_ext_table(b) == ext_table_B(K)


def test_monomial_category_is_not_k_monomial_for_punctured_plane():
    K = punctured_plane()
    C = build_monomial_category(2)
    cand = KMonomialCandidate(K, C, identity_functor(C))
    assert not check_axiom2(cand).passed
    gen = check_generation(cand)
    assert not gen.passed
    assert gen.cases[0].witness["koszul_zero"] is False
    with pytest.raises(GenerationFailure):
        check_generation(cand, strict=True)


def test_axiom2_triples_punctured_plane():
    got = sorted((repr(I), repr(J), k) for I, J, k in axiom2_triples(punctured_plane()))
    assert got == [("{1}", "{}", 2), ("{2}", "{}", 1)]


def test_vacuous_reports():
    cand = b_candidate(full_simplex(2))
    assert check_axiom2(cand).note == "vacuous"
    assert check_generation(cand).note == "vacuous"


def test_notcomp_not_vacuous_on_full_simplex():
    # {1} and {2} are incomparable faces of the full simplex and Hom between them vanishes
    rep = check_notcomp(b_candidate(full_simplex(2)))
    assert rep.passed and len(rep.cases) == 2


def test_generation_complex_shape():
    cand = b_candidate(punctured_plane())
    G, aug = generation_complex(cand, Face.of(1, 2))
    assert len(G) == 3 and check_mc(G) and is_closed(aug)


def test_translation_failure_is_reported():
    K = punctured_plane()
    D, F = build_B_category(K)
    # a translation that kills everything is not bijective
    cand = KMonomialCandidate(K, D, F, translation=lambda I, J, L, vec: {})
    rep = check_axiom3(cand)
    assert not rep.passed
    assert "translation" in rep.failures()[0].witness
