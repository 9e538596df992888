"""The universal model: the face-poset category P_K and Ext computed in tw(P_K).

``Hom(P_sigma, P_tau)`` is one-dimensional exactly when ``sigma ⊆ tau``.  A
subset ``I`` of ``[n]`` is represented by the Mayer-Vietoris resolution of the
down-set ``K|_I`` by the projectives on its facets:

    summand ``P_{∩S}[|S| - 1]`` for each nonempty set ``S`` of facets,

with arrows ``± e : P_{∩S} -> P_{∩(S - s)}``.  For ``I ∈ K`` this is ``P_I``.
"""
from __future__ import annotations

from itertools import combinations

from .lincat import FunctorData, InclusionCategory, build_monomial_category
from .simplicial import Face, SimplicialComplex, all_subsets
from .toric import ExtTable
from .twisted import HomComplex, TwistedComplex, TwSubcategory


def build_poset_category(K: SimplicialComplex) -> InclusionCategory:
    return InclusionCategory(K.faces, name="P_K")


def _nerve_complex(P: InclusionCategory, pieces: list[Face], top: Face | None = None) -> TwistedComplex:
    """Čech resolution over ``pieces`` (each a face of K)."""
    r = len(pieces)
    nodes = []
    for size in range(r, 0, -1):
        nodes.extend(combinations(range(r), size))
    pos = {S: k for k, S in enumerate(nodes)}

    def meet(S):
        out = top if top is not None else Face.full(64)
        for s in S:
            out = out & pieces[s]
        return out

    summands = [(meet(S), len(S) - 1) for S in nodes]
    delta = {}
    for S in nodes:
        if len(S) < 2:
            continue
        src = meet(S)
        for k, s in enumerate(S):
            T = S[:k] + S[k + 1:]
            dst = meet(T)
            delta[(pos[T], pos[S])] = {dst - src: -1 if k % 2 else 1}
    return TwistedComplex(P, summands, delta)


def represent_subset(K: SimplicialComplex, I: Face, P: InclusionCategory | None = None) -> TwistedComplex:
    """Twisted complex over P_K standing for ``D_I``; a single summand when ``I ∈ K``."""
    P = P or build_poset_category(K)
    facets = [f for f in K.faces if f <= I and not any(f < g for g in K.faces if g <= I)]
    facets.sort(key=lambda f: f.sort_key())
    X = _nerve_complex(P, facets, top=I)
    X.name = f"X_{I!r}"
    return X


def functorial_resolution(K: SimplicialComplex, I: Face, P: InclusionCategory | None = None) -> TwistedComplex:
    """Resolution of ``D_I`` by the pieces ``F ∩ I`` for the global facets ``F``.

    Quasi-isomorphic to :func:`represent_subset`, but indexed independently of
    ``I`` so that inclusions ``I ⊆ J`` induce strictly compatible maps.
    """
    P = P or build_poset_category(K)
    pieces = [F & I for F in K.facets()]
    X = _nerve_complex(P, pieces, top=I)
    X.name = f"Y_{I!r}"
    return X


def build_P_K(K: SimplicialComplex):
    """``(P_K, F_A)`` where ``F_A : C_n -> D_A`` sends ``C_I`` to its
    resolution over P_K and ``e_{J-I}`` to the map induced by ``I ⊆ J``."""
    P = build_poset_category(K)
    res = {I: functorial_resolution(K, I, P) for I in all_subsets(K.n)}
    D_A = TwSubcategory(P, res, name="D_A")
    source = build_monomial_category(K.n)
    mm = {}
    for I in source.objects:
        for J in source.objects:
            if not I <= J:
                continue
            X, Y = res[I], res[J]
            # same index sets: summand k of X maps to summand k of Y
            vec = {}
            for k, ((a, _), (b, _)) in enumerate(zip(X.summands, Y.summands)):
                vec[(k, k, b - a)] = 1
            mm[(I, J, J - I)] = vec
    return P, FunctorData(source, D_A, {I: I for I in source.objects}, mm)


def ext_table_A(K: SimplicialComplex, resolution=represent_subset) -> ExtTable:
    P = build_poset_category(K)
    reps = {I: resolution(K, I, P) for I in all_subsets(K.n)}
    t = ExtTable(K.n, label="A")
    for a in reps:
        for b in reps:
            t[(a, b)] = HomComplex(reps[a], reps[b]).cohomology()
    return t
