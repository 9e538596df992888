"""One-sided twisted complexes over a (dg) linear category.

Conventions (all cohomological):

* a summand is ``(object, shift)`` and stands for ``object[shift]``;
* a morphism ``A[s] -> B[t]`` of degree ``d`` is an underlying morphism of
  degree ``d + t - s``; composition is the plain matrix product;
* on ``Hom(A[s], B[t])`` the ground differential is ``(-1)^t d``;
* ``delta[(i, j)]`` is the component from summand ``j`` to summand ``i``;
* the Hom differential is ``D(phi) = d0(phi) + delta_Y phi - (-1)^|phi| phi delta_X``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import NotAComplex, NotClosed
from .lincat import FunctorData, LinearCategory
from .linalg import SparseMatrix, axpy, homology_dims

Vec = dict


class TwistedComplex:
    """Summands ``[(obj, shift), ...]`` with a degree-1 one-sided ``delta``."""

    __slots__ = ("cat", "summands", "delta", "name")

    def __init__(self, cat: LinearCategory, summands: Sequence[tuple], delta: Mapping | None = None,
                 name: str = ""):
        self.cat = cat
        self.summands = tuple((a, int(s)) for a, s in summands)
        clean = {}
        for (i, j), vec in (delta or {}).items():
            vec = {k: v for k, v in vec.items() if v != 0}
            if vec:
                clean[(i, j)] = vec
        self.delta = clean
        self.name = name
        m = len(self.summands)
        for (i, j), vec in self.delta.items():
            if not (0 <= i < m and 0 <= j < m):
                raise IndexError(f"delta entry ({i}, {j}) out of range")
            (a, s), (b, t) = self.summands[j], self.summands[i]
            idx = cat.hom_index(a, b)
            want = 1 + t - s
            for lab in vec:
                if lab not in idx:
                    raise ValueError(f"{lab!r} is not a basis morphism {a!r} -> {b!r}")
                if idx[lab][1] != want:
                    raise ValueError(f"delta[{i},{j}] has underlying degree {idx[lab][1]}, expected {want}")

    def __len__(self) -> int:
        return len(self.summands)

    def objects(self) -> list:
        return [a for a, _ in self.summands]

    def __repr__(self) -> str:
        body = " ⊕ ".join(f"{a!r}[{s}]" if s else f"{a!r}" for a, s in self.summands)
        return f"Tw({body}; {len(self.delta)} arrows)"


def single(cat: LinearCategory, obj, shift: int = 0) -> TwistedComplex:
    return TwistedComplex(cat, [(obj, shift)], {})


def _is_one_sided(X: TwistedComplex) -> bool:
    # the arrows of delta must form an acyclic graph (nilpotent delta)
    succ: dict[int, list[int]] = {}
    for (i, j) in X.delta:
        if i == j:
            return False
        succ.setdefault(j, []).append(i)
    state = [0] * len(X)

    def visit(v):
        state[v] = 1
        for w in succ.get(v, ()):
            if state[w] == 1 or (state[w] == 0 and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(state[v] or visit(v) for v in range(len(X)))


def mc_defect(X: TwistedComplex) -> dict:
    """Entries of ``d0(delta) + delta∘delta``; empty iff Maurer-Cartan holds."""
    C = X.cat
    out = {}
    incoming: dict[int, list] = {}
    for (i, j), v in X.delta.items():
        incoming.setdefault(i, []).append((j, v))
    keys = set(X.delta)
    for (k, i) in list(X.delta):
        for (j, _) in incoming.get(i, []):
            keys.add((k, j))
    for (k, j) in keys:
        total: Vec = {}
        a, b = X.summands[j][0], X.summands[k][0]
        if (k, j) in X.delta and C.has_differential:
            axpy(total, (-1) ** X.summands[k][1], C.differential(a, b, X.delta[(k, j)]))
        for i in range(len(X)):
            dki, dij = X.delta.get((k, i)), X.delta.get((i, j))
            if dki and dij:
                axpy(total, 1, C.compose(a, X.summands[i][0], b, dki, dij))
        if total:
            out[(k, j)] = total
    return out


def check_mc(X: TwistedComplex) -> bool:
    return _is_one_sided(X) and not mc_defect(X)


def shift(X: TwistedComplex, k: int) -> TwistedComplex:
    sign = -1 if k % 2 else 1
    return TwistedComplex(X.cat, [(a, s + k) for a, s in X.summands],
                          {ij: {l: sign * c for l, c in v.items()} for ij, v in X.delta.items()})


def direct_sum(*parts: TwistedComplex) -> TwistedComplex:
    cat = parts[0].cat
    summands, delta, off = [], {}, 0
    for P in parts:
        summands.extend(P.summands)
        for (i, j), v in P.delta.items():
            delta[(i + off, j + off)] = dict(v)
        off += len(P)
    return TwistedComplex(cat, summands, delta)


@dataclass
class TwMorphism:
    """``components[(i, j)]``: from source summand ``j`` to target summand ``i``."""

    src: TwistedComplex
    dst: TwistedComplex
    components: dict = field(default_factory=dict)
    degree: int = 0

    def __post_init__(self):
        self.components = {k: dict(v) for k, v in self.components.items() if v}

    def to_vector(self) -> Vec:
        return {(i, j, lab): c for (i, j), v in self.components.items() for lab, c in v.items() if c}

    @classmethod
    def from_vector(cls, X, Y, vec: Mapping, degree: int) -> "TwMorphism":
        comps: dict = {}
        for (i, j, lab), c in vec.items():
            if c:
                comps.setdefault((i, j), {})[lab] = c
        return cls(X, Y, comps, degree)

    def scaled(self, a) -> "TwMorphism":
        return TwMorphism(self.src, self.dst, {k: {l: a * c for l, c in v.items()} for k, v in self.components.items()},
                          self.degree)


def identity_morphism(X: TwistedComplex) -> TwMorphism:
    return TwMorphism(X, X, {(i, i): X.cat.identity(a) for i, (a, _) in enumerate(X.summands)}, 0)


def zero_morphism(X: TwistedComplex, Y: TwistedComplex, degree: int = 0) -> TwMorphism:
    return TwMorphism(X, Y, {}, degree)


def compose(g: TwMorphism, f: TwMorphism) -> TwMorphism:
    """``g ∘ f`` as a plain matrix product."""
    C = f.src.cat
    X, Y, Z = f.src, f.dst, g.dst
    out: dict = {}
    by_src: dict[int, list] = {}
    for (k, i), v in g.components.items():
        by_src.setdefault(i, []).append((k, v))
    for (i, j), fv in f.components.items():
        for k, gv in by_src.get(i, []):
            prod_ = C.compose(X.summands[j][0], Y.summands[i][0], Z.summands[k][0], gv, fv)
            if prod_:
                axpy(out.setdefault((k, j), {}), 1, prod_)
    return TwMorphism(X, Z, out, f.degree + g.degree)


class HomComplex:
    """``Hom^•(X, Y)`` in tw of the common ground category."""

    def __init__(self, X: TwistedComplex, Y: TwistedComplex):
        if X.cat is not Y.cat:
            raise ValueError("twisted complexes live over different categories")
        self.X, self.Y, self.cat = X, Y, X.cat
        C = self.cat
        by_deg: dict[int, list] = {}
        for i, (b, t) in enumerate(Y.summands):
            for j, (a, s) in enumerate(X.summands):
                for lab, u in C.hom_basis(a, b):
                    by_deg.setdefault(u - t + s, []).append((i, j, lab))
        self.by_degree = by_deg
        self.index = {d: {e: k for k, e in enumerate(bs)} for d, bs in by_deg.items()}
        self._y_out: dict[int, list] = {}
        for (k, i), v in Y.delta.items():
            self._y_out.setdefault(i, []).append((k, v))
        self._x_in: dict[int, list] = {}
        for (j, m), v in X.delta.items():
            self._x_in.setdefault(j, []).append((m, v))
        self._mats: dict[int, SparseMatrix] = {}

    @property
    def degrees(self) -> list[int]:
        if not self.by_degree:
            return []
        return list(range(min(self.by_degree), max(self.by_degree) + 1))

    def dims(self) -> dict[int, int]:
        return {d: len(b) for d, b in sorted(self.by_degree.items())}

    def basis(self, d: int) -> list:
        return self.by_degree.get(d, [])

    def degree_of(self, elem) -> int:
        i, j, lab = elem
        C = self.cat
        a, s = self.X.summands[j]
        b, t = self.Y.summands[i]
        return C.degree_of(a, b, lab) - t + s

    def differential_basis(self, elem, d: int | None = None) -> Vec:
        i, j, lab = elem
        C = self.cat
        a, s = self.X.summands[j]
        b, t = self.Y.summands[i]
        if d is None:
            d = C.degree_of(a, b, lab) - t + s
        out: Vec = {}
        if C.has_differential:
            sign = -1 if t % 2 else 1
            for tl, c in C.differential_basis(a, b, lab).items():
                axpy(out, sign * c, {(i, j, tl): 1})
        for k, dv in self._y_out.get(i, ()):
            c_ = self.Y.summands[k][0]
            for tl, c in C.compose(a, b, c_, dv, {lab: 1}).items():
                key = (k, j, tl)
                nv = out.get(key, 0) + c
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        sign = 1 if d % 2 else -1  # -(-1)^d
        for m, dv in self._x_in.get(j, ()):
            a_ = self.X.summands[m][0]
            for tl, c in C.compose(a_, a, b, {lab: 1}, dv).items():
                key = (i, m, tl)
                nv = out.get(key, 0) + sign * c
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    def differential(self, vec: Mapping) -> Vec:
        out: Vec = {}
        for e, c in vec.items():
            axpy(out, c, self.differential_basis(e))
        return out

    def matrix(self, d: int) -> SparseMatrix:
        """Differential from degree ``d`` to ``d + 1``."""
        if d in self._mats:
            return self._mats[d]
        src, dst = self.basis(d), self.basis(d + 1)
        didx = self.index.get(d + 1, {})
        entries = {}
        for col, e in enumerate(src):
            for t, c in self.differential_basis(e, d).items():
                try:
                    entries[(didx[t], col)] = c
                except KeyError as exc:
                    raise NotAComplex(f"differential leaves degree {d + 1}: {t!r}") from exc
        M = SparseMatrix(len(dst), len(src), entries)
        self._mats[d] = M
        return M

    def cohomology(self, check: bool = True) -> dict[int, int]:
        degs = self.degrees
        if not degs:
            return {}
        lo, hi = degs[0], degs[-1]
        mats = [self.matrix(d) for d in range(lo - 1, hi + 1)]
        dims = homology_dims(mats, check=check)
        # dims[0] is the (empty) degree lo-1 slot, dims[-1] the degree hi+1 slot
        return {lo - 1 + k: h for k, h in enumerate(dims) if h}

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in self.dims().items())

    def is_closed(self, f: TwMorphism) -> bool:
        return not self.differential(f.to_vector())

    def is_exact(self, vec: Mapping, d: int) -> bool:
        from .linalg import solve_in_span
        if not vec:
            return True
        images = [self.differential_basis(e, d - 1) for e in self.basis(d - 1)]
        images = [v for v in images if v]
        return solve_in_span(images, vec) is not None


def hom_complex(X: TwistedComplex, Y: TwistedComplex) -> HomComplex:
    return HomComplex(X, Y)


def cohomology(H: HomComplex) -> dict[int, int]:
    return H.cohomology()


def is_closed(f: TwMorphism) -> bool:
    return HomComplex(f.src, f.dst).is_closed(f)


def cone(f: TwMorphism, check: bool = True) -> TwistedComplex:
    """``X[1] ⊕ Y`` with differential ``[[-delta_X, 0], [f, delta_Y]]``."""
    if check and (f.degree != 0 or not is_closed(f)):
        raise NotClosed("cone needs a closed degree-0 morphism")
    X, Y = f.src, f.dst
    m = len(X)
    Xs = shift(X, 1)
    delta = dict(Xs.delta)
    for (i, j), v in Y.delta.items():
        delta[(i + m, j + m)] = dict(v)
    for (i, j), v in f.components.items():
        delta[(i + m, j)] = dict(v)
    return TwistedComplex(X.cat, list(Xs.summands) + list(Y.summands), delta)


def is_zero_object(X: TwistedComplex, method: str = "end") -> bool:
    """Whether ``X ≅ 0`` in tw.

    ``"end"`` checks that End(X) is acyclic.  ``"probe"`` checks that
    ``Hom(X_a, X)`` is acyclic for every summand object ``X_a``; the two agree
    because X is an iterated extension of its summands.
    """
    if len(X) == 0:
        return True
    if method == "end":
        return not HomComplex(X, X).cohomology()
    if method == "probe":
        seen = []
        for a, _ in X.summands:
            if a in seen:
                continue
            seen.append(a)
            if HomComplex(single(X.cat, a), X).cohomology():
                return False
        return True
    raise ValueError(f"unknown method {method!r}")


def is_quasi_iso(f: TwMorphism, method: str = "probe") -> bool:
    if f.degree != 0 or not is_closed(f):
        raise NotClosed("quasi-isomorphism test needs a closed degree-0 morphism")
    return is_zero_object(cone(f, check=False), method=method)


def find_diagonal_iso(X: TwistedComplex, Y: TwistedComplex) -> TwMorphism | None:
    """A morphism ``X -> Y`` that is ``±id`` on matched summands and
    intertwines the differentials exactly, or ``None``.

    Summands are matched by ``(object, shift)`` in order of appearance.
    """
    if len(X) != len(Y) or X.cat is not Y.cat:
        return None
    slots: dict = {}
    for i, s in enumerate(Y.summands):
        slots.setdefault(s, []).append(i)
    perm = []
    for s in X.summands:
        if not slots.get(s):
            return None
        perm.append(slots[s].pop(0))
    # propagate signs: eps_i * deltaX(i,j) == deltaY(perm i, perm j) * eps_j
    sign: dict[int, int] = {}
    adj: dict[int, list] = {}
    for (i, j), v in X.delta.items():
        w = Y.delta.get((perm[i], perm[j]), {})
        if w == v:
            rel = 1
        elif w == {k: -c for k, c in v.items()}:
            rel = -1
        else:
            return None
        adj.setdefault(i, []).append((j, rel))
        adj.setdefault(j, []).append((i, rel))
    inv = {p: i for i, p in enumerate(perm)}
    for (pi, pj) in Y.delta:
        if (inv[pi], inv[pj]) not in X.delta:
            return None
    for start in range(len(X)):
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for w, rel in adj.get(u, ()):
                want = sign[u] * rel
                if w not in sign:
                    sign[w] = want
                    stack.append(w)
                elif sign[w] != want:
                    return None
    C = X.cat
    comps = {(perm[i], i): {k: sign[i] * c for k, c in C.identity(a).items()} for i, (a, _) in enumerate(X.summands)}
    f = TwMorphism(X, Y, comps, 0)
    return f if is_closed(f) else None


# --- functors on twisted complexes --------------------------------------------

def apply_functor(F: FunctorData, X: TwistedComplex) -> TwistedComplex:
    summands = [(F.obj(a), s) for a, s in X.summands]
    delta = {}
    for (i, j), v in X.delta.items():
        img = F.mor(X.summands[j][0], X.summands[i][0], v)
        if img:
            delta[(i, j)] = img
    return TwistedComplex(F.target, summands, delta)


def apply_functor_morphism(F: FunctorData, f: TwMorphism, src: TwistedComplex | None = None,
                           dst: TwistedComplex | None = None) -> TwMorphism:
    src = src or apply_functor(F, f.src)
    dst = dst or apply_functor(F, f.dst)
    comps = {}
    for (i, j), v in f.components.items():
        img = F.mor(f.src.summands[j][0], f.dst.summands[i][0], v)
        if img:
            comps[(i, j)] = img
    return TwMorphism(src, dst, comps, f.degree)


class TwSubcategory(LinearCategory):
    """Full dg subcategory of tw(base) on named twisted complexes."""

    def __init__(self, base: LinearCategory, complexes: Mapping, name: str = "tw"):
        super().__init__(list(complexes))
        self.base = base
        self.complexes = dict(complexes)
        self.name = name
        self.has_differential = True
        self._homs: dict = {}

    def hom(self, a, b) -> HomComplex:
        H = self._homs.get((a, b))
        if H is None:
            H = HomComplex(self.complexes[a], self.complexes[b])
            self._homs[(a, b)] = H
        return H

    def _hom_basis(self, a, b):
        H = self.hom(a, b)
        return [(e, d) for d in sorted(H.by_degree) for e in H.by_degree[d]]

    def _differential_basis(self, a, b, label):
        return self.hom(a, b).differential_basis(label)

    def _compose_basis(self, a, b, c, g, f):
        k, i2, lg = g
        i, j, lf = f
        if i2 != i:
            return {}
        X, Y, Z = self.complexes[a], self.complexes[b], self.complexes[c]
        prod_ = self.base.compose_basis(X.summands[j][0], Y.summands[i][0], Z.summands[k][0], lg, lf)
        return {(k, j, lab): v for lab, v in prod_.items()}

    def _identity(self, a):
        X = self.complexes[a]
        out = {}
        for i, (o, _) in enumerate(X.summands):
            for lab, c in self.base.identity(o).items():
                out[(i, i, lab)] = c
        return out

    def hom_cohomology(self, a, b) -> dict[int, int]:
        return self.hom(a, b).cohomology()
