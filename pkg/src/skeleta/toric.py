"""The B-model: weight-graded Čech cohomology of O on Y_K and the dg category D_B.

Y_K is covered by the charts ``U_sigma = {z_i != 0 : i not in sigma}`` over the
facets of K.  At a fixed character ``m`` every chart has a 0- or 1-dimensional
space of sections (spanned by ``z^m`` when ``m_i >= 0`` on sigma), so Čech
cochains are labelled by increasing tuples of chart indices alone.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError
from .lincat import FunctorData, LinearCategory, build_monomial_category, label_str
from .linalg import SparseMatrix, homology_dims
from .simplicial import Face, SimplicialComplex, all_subsets, restrict

Weight = tuple


def weight(values: Iterable[int]) -> Weight:
    return tuple(int(v) for v in values)


def parse_weight(text: str) -> Weight:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t != "")
    except ValueError as exc:
        raise InputError(f"bad weight {text!r}; expected comma-separated integers") from exc


def indicator(I: Face, n: int) -> Weight:
    """``e_I`` as a weight."""
    return tuple(1 if i in I else 0 for i in range(1, n + 1))


def chart_has_weight(sigma: Face, m: Sequence[int]) -> bool:
    return all(m[i - 1] >= 0 for i in sigma)


@dataclass(frozen=True)
class ToricCover:
    K: SimplicialComplex
    pieces: tuple[Face, ...] = field(init=False)

    def __post_init__(self):
        facets = self.K.facets()
        object.__setattr__(self, "pieces", tuple(facets) if facets else (Face(),))

    @property
    def n(self) -> int:
        return self.K.n

    def intersection(self, T: Sequence[int]) -> Face:
        out = Face.full(self.n)
        for t in T:
            out = out & self.pieces[t]
        return out

    def admits(self, T: Sequence[int], m: Sequence[int]) -> bool:
        return chart_has_weight(self.intersection(T), m)


class CechComplex:
    """Alternating Čech complex of O at weight ``m``: level ``p`` is spanned by
    admissible increasing ``(p+1)``-tuples of chart indices."""

    def __init__(self, cover: ToricCover, m: Sequence[int]):
        if len(m) != cover.n:
            raise InputError(f"weight {tuple(m)} has length {len(m)}, expected {cover.n}")
        self.cover, self.m = cover, tuple(m)
        r = len(cover.pieces)
        self.levels: list[list[tuple[int, ...]]] = []
        for p in range(r):
            lvl = [T for T in combinations(range(r), p + 1) if cover.admits(T, self.m)]
            self.levels.append(lvl)
        while self.levels and not self.levels[-1]:
            self.levels.pop()
        self.index = [{T: k for k, T in enumerate(lvl)} for lvl in self.levels]

    def coboundary(self, T: tuple[int, ...]) -> dict:
        """``d(chi_T)``: sum over admissible ``T ∪ {j}`` with sign ``(-1)^position``."""
        out = {}
        r = len(self.cover.pieces)
        p = len(T)
        if p >= len(self.levels):
            return out
        nxt = self.index[p]
        for j in range(r):
            if j in T:
                continue
            U = tuple(sorted(T + (j,)))
            if U in nxt:
                out[U] = -1 if U.index(j) % 2 else 1
        return out

    def matrices(self) -> list[SparseMatrix]:
        mats = []
        for p in range(len(self.levels) - 1):
            entries = {}
            for col, T in enumerate(self.levels[p]):
                for U, c in self.coboundary(T).items():
                    entries[(self.index[p + 1][U], col)] = c
            mats.append(SparseMatrix(len(self.levels[p + 1]), len(self.levels[p]), entries))
        return mats

    def dims(self) -> list[int]:
        return [len(l) for l in self.levels]

    def cohomology(self) -> dict[int, int]:
        if not self.levels:
            return {}
        mats = self.matrices()
        hs = homology_dims(mats) if mats else [len(self.levels[0])]
        return {p: h for p, h in enumerate(hs) if h}


def cohomology_weight(cover: ToricCover, m: Sequence[int]) -> dict[int, int]:
    return CechComplex(cover, m).cohomology()


def eq_ext(cover: ToricCover, a: Sequence[int], b: Sequence[int]) -> dict[int, int]:
    """Equivariant ``Ext^•(O(a), O(b))``: the weight ``b - a`` part of ``H^•(Y_K, O)``."""
    return cohomology_weight(cover, tuple(y - x for x, y in zip(a, b)))


def koszul_support_check(K: SimplicialComplex, I: Face) -> bool:
    """True iff ``Z_I = {z_i = 0, i in I}`` misses every chart, i.e. ``I``
    lies in no piece of the cover."""
    cover = ToricCover(K)
    return not any(I <= sigma for sigma in cover.pieces)


# --- closed-form oracle ---------------------------------------------------------

def reduced_cohomology_dims(K: SimplicialComplex) -> dict[int, int]:
    """Reduced simplicial cohomology of K (floating-point ranks, small K only).

    The complex ``{∅}`` has ``H~^{-1} = 1``.
    """
    by_dim: dict[int, list[Face]] = {}
    for f in K.faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    top = max(by_dim)
    ranks = {}
    for d in range(-1, top):
        rows, cols = by_dim.get(d + 1, []), by_dim.get(d, [])
        if not rows or not cols:
            ranks[d] = 0
            continue
        ci = {f: k for k, f in enumerate(cols)}
        M = np.zeros((len(rows), len(cols)))
        for r, f in enumerate(rows):
            for pos, v in enumerate(f.vertices):
                M[r, ci[f.without_vertex(v)]] = (-1) ** pos
        ranks[d] = int(np.linalg.matrix_rank(M))
    out = {}
    for d in range(-1, top + 1):
        h = len(by_dim.get(d, [])) - ranks.get(d, 0) - ranks.get(d - 1, 0)
        if h:
            out[d] = h
    return out


def cohomology_closed_form(K: SimplicialComplex, m: Sequence[int]) -> dict[int, int]:
    """``H^p(Y_K, O)_m = H~^{p-1}(K restricted to {i : m_i < 0})``."""
    neg = Face.from_iterable(i + 1 for i, v in enumerate(m) if v < 0)
    sub = restrict(K, neg)
    return {p + 1: h for p, h in reduced_cohomology_dims(sub).items()}


def punctured_plane_formula(m: Sequence[int]) -> dict[int, int]:
    """Two-chart hand computation for C^2 minus the origin."""
    m1, m2 = m
    if m1 < 0 and m2 < 0:
        return {1: 1}
    if m1 >= 0 and m2 >= 0:
        return {0: 1}
    return {}


# --- the dg category D_B ----------------------------------------------------------

class CechCategory(LinearCategory):
    """Objects ``O(e_I)`` (labelled by ``I``); ``Hom(O(e_I), O(e_J))`` is the
    Čech complex at weight ``e_J - e_I``; composition is the cup product."""

    has_differential = True

    def __init__(self, K: SimplicialComplex, objects: Iterable[Face] | None = None):
        objs = list(objects) if objects is not None else all_subsets(K.n)
        super().__init__(objs)
        self.K = K
        self.cover = ToricCover(K)
        self.name = f"D_B({K.to_json()})"
        self._cech: dict = {}

    def cech(self, a: Face, b: Face) -> CechComplex:
        key = (a, b)
        C = self._cech.get(key)
        if C is None:
            n = self.K.n
            m = tuple(x - y for x, y in zip(indicator(b, n), indicator(a, n)))
            C = self._cech[key] = CechComplex(self.cover, m)
        return C

    def _hom_basis(self, a, b):
        C = self.cech(a, b)
        return [(T, p) for p, lvl in enumerate(C.levels) for T in lvl]

    def _differential_basis(self, a, b, label):
        return self.cech(a, b).coboundary(label)

    def _compose_basis(self, a, b, c, g, f):
        # g ∘ f = g ∪ f: front face of g meets back face of f
        if g[-1] != f[0]:
            return {}
        T = g + f[1:]
        return {T: 1} if T in self.cech(a, c).index[len(T) - 1] else {}

    def _identity(self, a):
        C = self.cech(a, a)
        return {T: 1 for T in C.levels[0]}

    def constant_cochain(self, a: Face, b: Face) -> dict:
        """The 0-cochain ``z^{e_b - e_a}`` on every admissible chart."""
        C = self.cech(a, b)
        return {T: 1 for T in (C.levels[0] if C.levels else [])}


def build_B_category(K: SimplicialComplex) -> tuple[CechCategory, FunctorData]:
    """D_B together with ``F_B : C_n -> D_B``, ``C_I ↦ O(e_I)``, ``e ↦ [z^{e_{J-I}}]``."""
    D = CechCategory(K)
    source = build_monomial_category(K.n)
    mm = {}
    for I in source.objects:
        for J in source.objects:
            if I <= J:
                mm[(I, J, J - I)] = D.constant_cochain(I, J)
    return D, FunctorData(source, D, {I: I for I in source.objects}, mm)


# --- Ext tables ---------------------------------------------------------------------

@dataclass
class ExtTable:
    """Graded Ext dimensions between generators, keyed by ``(I, J)``."""

    n: int
    entries: dict = field(default_factory=dict)
    label: str = ""

    def __getitem__(self, key) -> dict[int, int]:
        return self.entries.get(key, {})

    def __setitem__(self, key, value: Mapping[int, int]):
        self.entries[key] = {int(d): int(v) for d, v in sorted(value.items()) if v}

    def keys(self):
        return list(self.entries)

    def diff(self, other: "ExtTable") -> list[tuple]:
        out = []
        for key in sorted(set(self.entries) | set(other.entries), key=_pair_key):
            if self[key] != other[key]:
                out.append((key, self[key], other[key]))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtTable) and not self.diff(other)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "label": self.label,
            "entries": {f"{label_str(a)}->{label_str(b)}": {str(d): v for d, v in self[(a, b)].items()}
                        for a, b in sorted(self.entries, key=_pair_key)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ExtTable":
        try:
            data = json.loads(text)
            t = cls(int(data["n"]), label=data.get("label", ""))
            for key, val in data["entries"].items():
                a, b = key.split("->")
                t[(Face.from_iterable(json.loads(a)), Face.from_iterable(json.loads(b)))] = \
                    {int(d): int(v) for d, v in val.items()}
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad Ext table: {exc}") from exc
        return t

    def to_tsv(self) -> str:
        lines = ["source\ttarget\tdegree\tdim"]
        for a, b in sorted(self.entries, key=_pair_key):
            dims = self[(a, b)]
            if not dims:
                lines.append(f"{label_str(a)}\t{label_str(b)}\t-\t0")
            for d, v in dims.items():
                lines.append(f"{label_str(a)}\t{label_str(b)}\t{d}\t{v}")
        return "\n".join(lines)


def _pair_key(pair):
    a, b = pair
    return (len(a), a.sort_key(), len(b), b.sort_key())


def ext_table_B(K: SimplicialComplex, D: CechCategory | None = None) -> ExtTable:
    """Ext between all ``O(e_I)`` computed in tw(D_B) on single summands."""
    from .twisted import HomComplex, single
    if D is None:
        D, _ = build_B_category(K)
    t = ExtTable(K.n, label="B")
    for a in D.objects:
        Xa = single(D, a)
        for b in D.objects:
            t[(a, b)] = HomComplex(Xa, single(D, b)).cohomology()
    return t


def ext_table_B_direct(K: SimplicialComplex) -> ExtTable:
    """Same table straight from :func:`eq_ext` (no twisted-complex machinery)."""
    cover = ToricCover(K)
    t = ExtTable(K.n, label="B-direct")
    for a in all_subsets(K.n):
        for b in all_subsets(K.n):
            t[(a, b)] = eq_ext(cover, indicator(a, K.n), indicator(b, K.n))
    return t
