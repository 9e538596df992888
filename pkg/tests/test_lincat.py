import json

import pytest

from conftest import punctured_plane
from skeleta.lincat import (InclusionCategory, Report, TableCategory, build_monomial_category,
                            category_from_dict, category_to_dict, check_category_axioms,
                            check_delta_fully_faithful, check_functor, identity_functor, label_str)
from skeleta.posetalg import build_poset_category
from skeleta.simplicial import Face, boundary_of_simplex, full_simplex
from skeleta.toric import build_B_category


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_monomial_category(n):
    C = build_monomial_category(n)
    assert len(C.objects) == 2 ** n
    assert check_category_axioms(C).passed
    # Hom(I, J) is one-dimensional iff I ⊆ J
    for a in C.objects:
        for b in C.objects:
            assert len(C.hom_basis(a, b)) == (1 if a <= b else 0)


def test_composition_is_union():
    C = build_monomial_category(3)
    a, b, c = Face(), Face.of(2), Face.of(1, 2)
    assert C.compose(a, b, c, {Face.of(1): 1}, {Face.of(2): 3}) == {Face.of(1, 2): 3}
    assert C.identity(b) == {Face(): 1}


def test_poset_category():
    P = build_poset_category(boundary_of_simplex(3))
    assert check_category_axioms(P).passed
    assert len(P.objects) == 7


def broken_table():
    # three objects in a line; the composite of the two arrows is scaled by 2
    objs = ["x", "y", "z"]
    homs = {("x", "x"): [("1x", 0)], ("y", "y"): [("1y", 0)], ("z", "z"): [("1z", 0)],
            ("x", "y"): [("f", 0)], ("y", "z"): [("g", 0)], ("x", "z"): [("gf", 0)]}
    comp = {}
    for (a, b), basis in homs.items():
        for lab, _ in basis:
            comp[(a, a, b, lab, f"1{a}")] = {lab: 1}
            comp[(a, b, b, f"1{b}", lab)] = {lab: 1}
    comp[("x", "y", "z", "g", "f")] = {"gf": 2}
    ids = {o: {f"1{o}": 1} for o in objs}
    return TableCategory(objs, homs, comp, ids)


def test_table_category_axioms_pass_and_fail():
    T = broken_table()
    assert check_category_axioms(T).passed  # scaling is still associative
    T.identities["y"] = {"1y": 2}
    rep = check_category_axioms(T)
    assert not rep.passed and any(c.key.startswith("identity") for c in rep.failures())


def test_dg_table_detects_leibniz_failure():
    objs = ["x"]
    homs = {("x", "x"): [("1", 0), ("u", 0), ("v", 1)]}
    comp = {("x", "x", "x", "1", "1"): {"1": 1}}
    for lab in ("u", "v"):
        comp[("x", "x", "x", lab, "1")] = {lab: 1}
        comp[("x", "x", "x", "1", lab)] = {lab: 1}
    # u∘u = u, so d(u∘u) = v while d(u)∘u + u∘d(u) = 0 (v∘u, u∘v undefined)
    diff = {("x", "x", "u"): {"v": 1}}
    comp[("x", "x", "x", "u", "u")] = {"u": 1}
    T = TableCategory(objs, homs, comp, {"x": {"1": 1}}, diff)
    rep = check_category_axioms(T)
    assert not rep.passed
    assert any("leibniz" in c.key for c in rep.failures())


def test_identity_functor_and_axiom1():
    C = build_monomial_category(2)
    F = identity_functor(C)
    assert check_functor(F).passed
    assert check_delta_fully_faithful(F, 2).passed


def test_dict_roundtrip_preserves_cohomology():
    K = punctured_plane()
    D, F = build_B_category(K)
    data = json.loads(json.dumps(category_to_dict(D, F)))
    T, G = category_from_dict(data, n=2)
    assert check_category_axioms(T).passed
    assert check_functor(G).passed
    for a in D.objects:
        for b in D.objects:
            assert T.hom_cohomology(label_str(a), label_str(b)) == D.hom_cohomology(a, b)


def test_report_serialization():
    rep = Report("demo")
    rep.add("k1", True, {"x": 1})
    rep.add("k2", False, {"x": 0})
    assert not rep.passed and len(rep.failures()) == 1
    d = json.loads(rep.to_json())
    assert d["axiom"] == "demo"
    assert d["cases"][1] == {"triple": "k2", "verdict": "fail", "witness_dims": {"x": 0}}
    assert rep.to_tsv().splitlines()[0].split("\t")[:3] == ["demo", "k1", "pass"]
    assert "FAIL" in rep.summary()


def test_label_str_is_stable():
    assert label_str(Face.of(1, 2)) == "[1, 2]"
    assert label_str((0, 1)) == label_str((0, 1))


def test_inclusion_category_on_full_simplex_matches_monomial():
    P = InclusionCategory(full_simplex(2).faces)
    C = build_monomial_category(2)
    assert P.objects == C.objects
