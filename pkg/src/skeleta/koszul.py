"""Shifted Koszul complexes ``K_I{J}`` and their distinguished triangles.

``K_I{J}`` has one summand ``C_{I' ∪ J}[|I - I'|]`` for each ``I' ⊆ I`` and
arrows ``± e_i : C_{I'∪J} -> C_{I'∪{i}∪J}``.  The sign of the arrow adding
``i`` is ``(-1)^{#{i' in I' : sgn(i') < sgn(i)}}``, which makes every square
anticommute.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .lincat import FunctorData, build_monomial_category, identity_functor
from .simplicial import Face
from .twisted import (TwistedComplex, TwMorphism, apply_functor, apply_functor_morphism, cone,
                      find_diagonal_iso, is_quasi_iso, is_zero_object)


@dataclass(frozen=True)
class KoszulSpec:
    I: Face
    J: Face = Face()
    order: tuple[int, ...] | None = None  # sgn as a listing of I; default increasing

    def __post_init__(self):
        if not self.I.isdisjoint(self.J):
            raise InputError(f"I={self.I!r} and J={self.J!r} must be disjoint")
        if self.order is None:
            object.__setattr__(self, "order", self.I.vertices)
        elif sorted(self.order) != list(self.I.vertices):
            raise InputError(f"order {self.order} is not a bijection onto I={self.I!r}")

    def sgn(self, i: int) -> int:
        return self.order.index(i) + 1


def _subsets_by_size(I: Face) -> list[Face]:
    return sorted(I.subsets(), key=lambda f: (len(f), f.sort_key()))


def koszul_sign(spec: KoszulSpec, Ip: Face, i: int, rule: str = "standard") -> int:
    if rule == "standard":
        return -1 if sum(1 for v in Ip if spec.sgn(v) < spec.sgn(i)) % 2 else 1
    if rule == "literal":
        # (-1)^{sgn(i) + |I'|}; kept to exhibit that it fails delta^2 = 0
        return -1 if (spec.sgn(i) + len(Ip)) % 2 else 1
    raise ValueError(f"unknown sign rule {rule!r}")


def koszul_complex(n: int, spec: KoszulSpec, rule: str = "standard", cat=None) -> TwistedComplex:
    """``K_I{J}`` in tw(C_n)."""
    if cat is None:
        cat = build_monomial_category(n)
    if not (spec.I | spec.J) <= Face.full(n):
        raise InputError(f"I ∪ J must lie in [{n}]")
    subs = _subsets_by_size(spec.I)
    pos = {Ip: k for k, Ip in enumerate(subs)}
    summands = [(Ip | spec.J, len(spec.I - Ip)) for Ip in subs]
    delta = {}
    for Ip in subs:
        for i in (spec.I - Ip):
            target = Ip.with_vertex(i)
            delta[(pos[target], pos[Ip])] = {Face.of(i): koszul_sign(spec, Ip, i, rule)}
    return TwistedComplex(cat, summands, delta, name=f"K_{spec.I!r}{{{spec.J!r}}}")


def _source_n(F: FunctorData) -> int:
    return max((len(a) for a in F.source.objects), default=0)


def build_koszul(spec: KoszulSpec, F: FunctorData, rule: str = "standard") -> TwistedComplex:
    """``F(K_I{J})`` in tw of the target category of ``F``."""
    n = _source_n(F)
    return apply_functor(F, koszul_complex(n, spec, rule, cat=F.source))


def e_map(n: int, I: Face, J: Face, k: int, cat=None) -> TwMorphism:
    """The closed degree-0 map ``e_k : K_I{J} -> K_I{J ∪ {k}}`` in tw(C_n)."""
    if k in I or k in J:
        raise InputError(f"k={k} must lie outside I ∪ J")
    X = koszul_complex(n, KoszulSpec(I, J), cat=cat)
    Y = koszul_complex(n, KoszulSpec(I, J.with_vertex(k)), cat=X.cat)
    comps = {(i, i): {Face.of(k): 1} for i in range(len(X))}
    return TwMorphism(X, Y, comps, 0)


def koszul_triangle(I: Face, J: Face, k: int, F: FunctorData):
    """``(F(e_k), iso)`` where ``iso : cone(F(e_k)) -> F(K_{I∪k}{J})`` is a
    verified diagonal ±1 isomorphism."""
    n = _source_n(F)
    f = e_map(n, I, J, k, cat=F.source)
    Ff = apply_functor_morphism(F, f)
    C = cone(Ff)
    target = build_koszul(KoszulSpec(I.with_vertex(k), J), F)
    iso = find_diagonal_iso(C, target)
    if iso is None:
        raise AssertionError(f"cone(e_{k}) is not diagonally isomorphic to K_{I.with_vertex(k)!r}{{{J!r}}}")
    return Ff, iso


def acyclicity_test(spec: KoszulSpec, F: FunctorData, method: str = "probe") -> bool:
    return is_zero_object(build_koszul(spec, F), method=method)


def sgn_comparison(spec: KoszulSpec, order: Sequence[int], F: FunctorData) -> TwMorphism | None:
    """Diagonal iso between the Koszul complexes for two orderings of ``I``."""
    X = build_koszul(spec, F)
    Y = build_koszul(KoszulSpec(spec.I, spec.J, tuple(order)), F)
    iso = find_diagonal_iso(X, Y)
    if iso is not None and not is_quasi_iso(iso):
        return None
    return iso


def koszul_in_Cn(n: int, I: Face, J: Face = Face()) -> TwistedComplex:
    return build_koszul(KoszulSpec(I, J), identity_functor(build_monomial_category(n)))
