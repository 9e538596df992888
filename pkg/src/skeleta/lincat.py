"""Finite graded linear categories with explicit bases.

A category exposes, for each ordered pair of objects, an ordered basis of
``(label, degree)`` pairs together with structure constants for composition
and (optionally) a differential.  Morphisms are sparse vectors
``{label: coefficient}``.

Concrete models:

* :class:`InclusionCategory` - one morphism ``e_{J-I}`` per inclusion ``I ⊆ J``.
  ``build_monomial_category(n)`` gives C_n, restricting to faces of K gives P_K.
* :class:`TableCategory` - everything stored explicitly; what JSON dumps load into.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InputError
from .linalg import SparseMatrix, axpy, homology_dims, solve_in_span
from .simplicial import Face, all_subsets

Label = Hashable
Vec = dict


class LinearCategory:
    """Base class; subclasses implement the ``_``-prefixed hooks."""

    name = "category"
    has_differential = False

    def __init__(self, objects: Sequence):
        self.objects = list(objects)
        self._object_set = set(self.objects)
        self._basis_cache: dict = {}
        self._index_cache: dict = {}
        self._comp_cache: dict = {}

    # hooks -----------------------------------------------------------------
    def _hom_basis(self, a, b) -> list[tuple[Label, int]]:
        raise NotImplementedError

    def _compose_basis(self, a, b, c, g: Label, f: Label) -> Vec:
        raise NotImplementedError

    def _differential_basis(self, a, b, label: Label) -> Vec:
        return {}

    def _identity(self, a) -> Vec:
        raise NotImplementedError

    # public API ------------------------------------------------------------
    def __contains__(self, obj) -> bool:
        return obj in self._object_set

    def hom_basis(self, a, b) -> tuple[tuple[Label, int], ...]:
        key = (a, b)
        out = self._basis_cache.get(key)
        if out is None:
            out = tuple(self._hom_basis(a, b))
            self._basis_cache[key] = out
        return out

    def hom_index(self, a, b) -> dict:
        key = (a, b)
        out = self._index_cache.get(key)
        if out is None:
            out = {lab: (i, d) for i, (lab, d) in enumerate(self.hom_basis(a, b))}
            self._index_cache[key] = out
        return out

    def degree_of(self, a, b, label) -> int:
        return self.hom_index(a, b)[label][1]

    def hom_dims(self, a, b) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.hom_basis(a, b):
            out[d] = out.get(d, 0) + 1
        return out

    def compose_basis(self, a, b, c, g, f) -> Vec:
        """``g ∘ f`` for basis elements ``f: a -> b`` and ``g: b -> c``."""
        key = (a, b, c, g, f)
        out = self._comp_cache.get(key)
        if out is None:
            out = self._compose_basis(a, b, c, g, f)
            self._comp_cache[key] = out
        return out

    def compose(self, a, b, c, g: Mapping, f: Mapping) -> Vec:
        out: Vec = {}
        for gl, gc in g.items():
            for fl, fc in f.items():
                prod_ = self.compose_basis(a, b, c, gl, fl)
                if prod_:
                    axpy(out, gc * fc, prod_)
        return out

    def differential_basis(self, a, b, label) -> Vec:
        if not self.has_differential:
            return {}
        return self._differential_basis(a, b, label)

    def differential(self, a, b, vec: Mapping) -> Vec:
        out: Vec = {}
        if not self.has_differential:
            return out
        for lab, c in vec.items():
            axpy(out, c, self.differential_basis(a, b, lab))
        return out

    def identity(self, a) -> Vec:
        return dict(self._identity(a))

    def hom_complex_matrices(self, a, b):
        """Degree-graded chain complex ``Hom^•(a, b)``.

        Returns ``(degrees, bases, mats)`` where ``mats[i]`` maps degree
        ``degrees[i]`` to ``degrees[i] + 1``.
        """
        by_deg: dict[int, list] = {}
        for lab, d in self.hom_basis(a, b):
            by_deg.setdefault(d, []).append(lab)
        if not by_deg:
            return [], [], []
        lo, hi = min(by_deg), max(by_deg)
        degrees = list(range(lo, hi + 1))
        bases = [by_deg.get(d, []) for d in degrees]
        index = [{lab: i for i, lab in enumerate(bs)} for bs in bases]
        mats = []
        for k in range(len(degrees) - 1):
            entries = {}
            for j, lab in enumerate(bases[k]):
                for tl, c in self.differential_basis(a, b, lab).items():
                    entries[(index[k + 1][tl], j)] = c
            mats.append(SparseMatrix(len(bases[k + 1]), len(bases[k]), entries))
        return degrees, bases, mats

    def hom_cohomology(self, a, b) -> dict[int, int]:
        """Cohomology dimensions of ``Hom^•(a, b)`` (nonzero degrees only)."""
        degrees, bases, mats = self.hom_complex_matrices(a, b)
        if not degrees:
            return {}
        if not self.has_differential:
            return {d: len(bs) for d, bs in zip(degrees, bases) if bs}
        dims = homology_dims(mats) if mats else [len(bases[0])]
        return {d: h for d, h in zip(degrees, dims) if h}

    def is_cocycle(self, a, b, vec: Mapping) -> bool:
        return not self.differential(a, b, vec)

    def is_coboundary(self, a, b, vec: Mapping) -> bool:
        """Whether ``vec`` (homogeneous) is exact in ``Hom^•(a, b)``."""
        if not vec:
            return True
        if not self.has_differential:
            return False
        idx = self.hom_index(a, b)
        degs = {idx[lab][1] for lab in vec}
        if len(degs) != 1:
            raise ValueError("is_coboundary expects a homogeneous vector")
        d = degs.pop()
        images = [self.differential_basis(a, b, lab) for lab, dd in self.hom_basis(a, b) if dd == d - 1]
        images = [v for v in images if v]
        return solve_in_span(images, vec) is not None

    def same_class(self, a, b, u: Mapping, v: Mapping) -> bool:
        diff = dict(u)
        axpy(diff, -1, v)
        return self.is_coboundary(a, b, diff)

    def describe(self) -> str:
        return f"{self.name} with {len(self.objects)} objects"


class InclusionCategory(LinearCategory):
    """Objects are faces; ``Hom(I, J)`` is spanned by ``e_{J-I}`` iff ``I ⊆ J``.

    All morphisms sit in degree 0 and ``e_B ∘ e_A = e_{A ∪ B}``.
    """

    def __init__(self, objects: Iterable[Face], name: str = "C"):
        super().__init__(sorted(objects, key=lambda f: (len(f), f.sort_key())))
        self.name = name

    def _hom_basis(self, a: Face, b: Face):
        return [(b - a, 0)] if a <= b else []

    def _compose_basis(self, a, b, c, g, f):
        # g = e_{c-b}, f = e_{b-a}; both labels validated by the callers' bases
        return {c - a: 1}

    def _identity(self, a):
        return {Face(): 1}


def build_monomial_category(n: int) -> InclusionCategory:
    """The monomial category C_n on all subsets of ``[n]``."""
    if n < 0:
        raise InputError("n must be nonnegative")
    return InclusionCategory(all_subsets(n), name=f"C_{n}")


class TableCategory(LinearCategory):
    """A category given by explicit tables (used for JSON round trips)."""

    def __init__(self, objects, homs: Mapping, comp: Mapping, identities: Mapping,
                 diff: Mapping | None = None, name: str = "table"):
        super().__init__(objects)
        self.name = name
        self.homs = {k: list(v) for k, v in homs.items()}
        self.comp = dict(comp)
        self.identities = dict(identities)
        self.diff = dict(diff or {})
        self.has_differential = bool(self.diff)

    def _hom_basis(self, a, b):
        return self.homs.get((a, b), [])

    def _compose_basis(self, a, b, c, g, f):
        return dict(self.comp.get((a, b, c, g, f), {}))

    def _differential_basis(self, a, b, label):
        return dict(self.diff.get((a, b, label), {}))

    def _identity(self, a):
        return self.identities[a]


# --- functors ---------------------------------------------------------------

@dataclass
class FunctorData:
    """A degree-0 linear functor given on objects and basis morphisms.

    ``morphism_map[(a, b, label)]`` is the image vector in
    ``Hom_target(object_map[a], object_map[b])``.
    """

    source: LinearCategory
    target: LinearCategory
    object_map: dict
    morphism_map: dict = field(default_factory=dict)

    def obj(self, a):
        return self.object_map[a]

    def mor(self, a, b, vec: Mapping) -> Vec:
        out: Vec = {}
        for lab, c in vec.items():
            img = self.morphism_map.get((a, b, lab))
            if img:
                axpy(out, c, img)
        return out

    def mor_basis(self, a, b, label) -> Vec:
        return dict(self.morphism_map.get((a, b, label), {}))


def identity_functor(C: LinearCategory) -> FunctorData:
    mm = {}
    for a in C.objects:
        for b in C.objects:
            for lab, _ in C.hom_basis(a, b):
                mm[(a, b, lab)] = {lab: 1}
    return FunctorData(C, C, {a: a for a in C.objects}, mm)


def monomial_functor(n: int, target: LinearCategory, object_map: Mapping,
                     image: Callable[[Face, Face], Vec]) -> FunctorData:
    """Functor out of C_n from an object map and ``image(I, J)`` for each ``I ⊆ J``."""
    source = build_monomial_category(n)
    mm = {}
    for I in source.objects:
        for J in source.objects:
            if I <= J:
                mm[(I, J, J - I)] = image(I, J)
    return FunctorData(source, target, dict(object_map), mm)


# --- reports ----------------------------------------------------------------

@dataclass
class Case:
    key: str
    verdict: bool
    witness: object = None

    def to_dict(self) -> dict:
        return {"triple": self.key, "verdict": "pass" if self.verdict else "fail",
                "witness_dims": self.witness}


@dataclass
class Report:
    """Outcome of a verification battery, one :class:`Case` per checked item."""

    axiom: str
    cases: list[Case] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.cases)

    def add(self, key, verdict: bool, witness=None):
        self.cases.append(Case(str(key), bool(verdict), witness))

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.verdict]

    def to_dict(self) -> dict:
        out = {"axiom": self.axiom, "passed": self.passed, "cases": [c.to_dict() for c in self.cases]}
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str)

    def to_tsv(self) -> str:
        lines = [f"{self.axiom}\t{c.key}\t{'pass' if c.verdict else 'fail'}\t{_jsonish(c.witness)}"
                 for c in self.cases]
        return "\n".join(lines)

    def summary(self) -> str:
        bad = self.failures()
        head = f"{self.axiom}: {'pass' if not bad else 'FAIL'} ({len(self.cases)} cases"
        return head + (f", {len(bad)} failed; first {bad[0].key})" if bad else ")")


def _jsonish(x) -> str:
    if x is None:
        return ""
    return json.dumps(x, default=str, sort_keys=True)


# --- axiom checks -----------------------------------------------------------

def check_category_axioms(C: LinearCategory, objects: Sequence | None = None,
                          sample: int | None = None, seed: int = 0) -> Report:
    """Associativity, identities, degree additivity, and for dg categories
    ``d^2 = 0`` and the Leibniz rule, on basis elements.

    ``sample`` limits the number of object quadruples checked for
    associativity (random, seeded); pairs and triples are always exhaustive.
    """
    rep = Report("category_axioms")
    objs = list(objects if objects is not None else C.objects)
    quads = list(product(objs, repeat=4))
    if sample is not None and sample < len(quads):
        quads = random.Random(seed).sample(quads, sample)
        rep.note = f"sampled {sample} object quadruples"
    pairs = list(product(objs, repeat=2))

    for a, b in pairs:
        basis = C.hom_basis(a, b)
        idx = C.hom_index(a, b)
        ida, idb = C.identity(a), C.identity(b)
        for lab, d in basis:
            f = {lab: 1}
            ok = C.compose(a, b, b, idb, f) == f and C.compose(a, a, b, f, ida) == f
            if not ok:
                rep.add(f"identity {a!r}->{b!r} {lab!r}", False)
            if C.has_differential:
                df = C.differential(a, b, f)
                if any(idx[t][1] != d + 1 for t in df):
                    rep.add(f"differential degree {a!r}->{b!r} {lab!r}", False)
                if C.differential(a, b, df):
                    rep.add(f"d^2 {a!r}->{b!r} {lab!r}", False)
        if C.has_differential and C.differential(a, a, ida):
            rep.add(f"d(id) {a!r}", False)

    triples = list(product(objs, repeat=3))
    for a, b, c in triples:
        fb, gb = C.hom_basis(a, b), C.hom_basis(b, c)
        ac_index = C.hom_index(a, c)
        for (fl, fd), (gl, gd) in product(fb, gb):
            gf = C.compose_basis(a, b, c, gl, fl)
            if any(ac_index[t][1] != fd + gd for t in gf):
                rep.add(f"degree ({a!r},{b!r},{c!r}) {gl!r}∘{fl!r}", False)
            if C.has_differential:
                lhs = C.differential(a, c, gf)
                rhs = C.compose(a, b, c, {gl: 1}, C.differential(a, b, {fl: 1}))
                rhs = {k: (-1) ** gd * v for k, v in rhs.items()}
                axpy(rhs, 1, C.compose(a, b, c, C.differential(b, c, {gl: 1}), {fl: 1}))
                if lhs != rhs:
                    rep.add(f"leibniz ({a!r},{b!r},{c!r}) {gl!r}∘{fl!r}", False)

    checked = 0
    for a, b, c, dd in quads:
        fb, gb, hb = C.hom_basis(a, b), C.hom_basis(b, c), C.hom_basis(c, dd)
        if not fb or not gb or not hb:
            continue
        for (fl, _), (gl, _) in product(fb, gb):
            gf = C.compose_basis(a, b, c, gl, fl)
            for hl, _ in hb:
                left = C.compose(a, c, dd, {hl: 1}, gf)
                right = C.compose(a, b, dd, C.compose_basis(b, c, dd, hl, gl), {fl: 1})
                checked += 1
                if left != right:
                    rep.add(f"assoc ({a!r},{b!r},{c!r},{dd!r}) {hl!r}∘{gl!r}∘{fl!r}", False, [left, right])
    if not rep.cases:
        rep.add(f"all ({checked} composable triples)", True)
    return rep


def check_functor(F: FunctorData) -> Report:
    """Identities and composition preserved on the nose, images closed of degree 0."""
    rep = Report("functor")
    S, T = F.source, F.target
    for a in S.objects:
        ida = F.mor(a, a, S.identity(a))
        if ida != T.identity(F.obj(a)):
            rep.add(f"identity {a!r}", False)
    for a, b in product(S.objects, repeat=2):
        for lab, d in S.hom_basis(a, b):
            img = F.mor_basis(a, b, lab)
            ta, tb = F.obj(a), F.obj(b)
            idx = T.hom_index(ta, tb)
            if any(idx[t][1] != d for t in img):
                rep.add(f"degree {a!r}->{b!r}", False)
            if T.has_differential and T.differential(ta, tb, img):
                rep.add(f"not closed {a!r}->{b!r}", False)
    for a, b, c in product(S.objects, repeat=3):
        for (fl, _), (gl, _) in product(S.hom_basis(a, b), S.hom_basis(b, c)):
            lhs = F.mor(a, c, S.compose_basis(a, b, c, gl, fl))
            rhs = T.compose(F.obj(a), F.obj(b), F.obj(c), F.mor_basis(b, c, gl), F.mor_basis(a, b, fl))
            if lhs != rhs:
                rep.add(f"composition ({a!r},{b!r},{c!r})", False)
    if not rep.cases:
        rep.add("all", True)
    return rep


def check_delta_fully_faithful(F: FunctorData, n: int) -> Report:
    """For each ``I ⊆ J``: ``F`` is an isomorphism ``Hom(C_I, C_J) -> H^0 Hom(D_I, D_J)``.

    Injective means the image of ``e_{J-I}`` is a nonzero class; surjective
    means ``H^0`` is one-dimensional.
    """
    rep = Report("axiom1")
    for I in all_subsets(n):
        for J in all_subsets(n):
            if not I <= J:
                continue
            a, b = F.obj(I), F.obj(J)
            T = F.target
            img = F.mor_basis(I, J, J - I)
            h = T.hom_cohomology(a, b)
            h0 = h.get(0, 0)
            injective = bool(img) and T.is_cocycle(a, b, img) and not T.is_coboundary(a, b, img)
            rep.add(f"{I!r}⊆{J!r}", injective and h0 == 1, {"H0": h0, "injective": injective})
    return rep


# --- serialization ----------------------------------------------------------

def label_str(x) -> str:
    if isinstance(x, Face):
        return json.dumps(list(x.vertices))
    if isinstance(x, tuple):
        return "(" + ",".join(label_str(y) for y in x) + ")"
    return str(x)


def category_to_dict(C: LinearCategory, functor: FunctorData | None = None) -> dict:
    objs = [label_str(a) for a in C.objects]
    homs, comp, diff = {}, [], []
    for a, b in product(C.objects, repeat=2):
        basis = C.hom_basis(a, b)
        if basis:
            homs[f"{label_str(a)}->{label_str(b)}"] = [[label_str(l), d] for l, d in basis]
            for l, _ in basis:
                dl = C.differential_basis(a, b, l)
                if dl:
                    diff.append([label_str(a), label_str(b), label_str(l),
                                 {label_str(k): int(v) for k, v in dl.items()}])
    for a, b, c in product(C.objects, repeat=3):
        for (fl, _), (gl, _) in product(C.hom_basis(a, b), C.hom_basis(b, c)):
            v = C.compose_basis(a, b, c, gl, fl)
            if v:
                comp.append([label_str(a), label_str(b), label_str(c), label_str(gl), label_str(fl),
                             {label_str(k): int(x) for k, x in v.items()}])
    out = {
        "name": C.name,
        "objects": objs,
        "homs": homs,
        "composition": comp,
        "differential": diff,
        "identities": {label_str(a): {label_str(k): int(v) for k, v in C.identity(a).items()}
                       for a in C.objects},
    }
    if functor is not None:
        out["functor"] = {
            "object_map": {label_str(a): label_str(functor.obj(a)) for a in functor.source.objects},
            "morphism_map": [[label_str(a), label_str(b), label_str(l),
                              {label_str(k): int(v) for k, v in img.items()}]
                             for (a, b, l), img in functor.morphism_map.items() if img],
        }
    return out


def category_from_dict(data: Mapping, n: int | None = None) -> tuple[TableCategory, FunctorData | None]:
    """Inverse of :func:`category_to_dict`; labels and objects become strings.

    If a functor is present it is rebuilt with source C_n (``n`` inferred from
    the object map when omitted).
    """
    try:
        objects = list(data["objects"])
        homs = {}
        for key, basis in data["homs"].items():
            a, b = key.split("->")
            homs[(a, b)] = [(str(l), int(d)) for l, d in basis]
        comp = {(a, b, c, g, f): {k: int(v) for k, v in val.items()}
                for a, b, c, g, f, val in data["composition"]}
        diff = {(a, b, l): {k: int(v) for k, v in val.items()}
                for a, b, l, val in data.get("differential", [])}
        ids = {a: {k: int(v) for k, v in val.items()} for a, val in data["identities"].items()}
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad category dump: {exc}") from exc
    C = TableCategory(objects, homs, comp, ids, diff, name=data.get("name", "table"))
    fun = data.get("functor")
    if fun is None:
        return C, None
    faces = {s: Face.from_iterable(json.loads(s)) for s in fun["object_map"]}
    if n is None:
        n = max((max(f.vertices) for f in faces.values() if f), default=0)
    source = build_monomial_category(n)
    omap = {faces[s]: t for s, t in fun["object_map"].items()}
    mm = {}
    for a, b, l, img in fun["morphism_map"]:
        fa, fb = faces[a], faces[b]
        mm[(fa, fb, fb - fa)] = {k: int(v) for k, v in img.items()}
    return C, FunctorData(source, C, omap, mm)
