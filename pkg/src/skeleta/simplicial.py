"""Abstract simplicial complexes on ``[n] = {1, ..., n}`` and the smooth
components of the associated Lagrangian skeleton.

Faces are bitmasks wrapped in :class:`Face`; vertex ``i`` is bit ``i - 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

from .errors import InputError, NotAFace

MAX_VERTICES = 20


@dataclass(frozen=True)
class Face:
    """A finite subset of ``[n]`` stored as a bitmask."""

    bits: int = 0

    @classmethod
    def of(cls, *vertices: int) -> "Face":
        bits = 0
        for v in vertices:
            if v < 1:
                raise ValueError(f"vertices are 1-based, got {v}")
            bits |= 1 << (v - 1)
        return cls(bits)

    @classmethod
    def from_iterable(cls, vertices: Iterable[int]) -> "Face":
        return cls.of(*vertices)

    @classmethod
    def full(cls, n: int) -> "Face":
        return cls((1 << n) - 1)

    @property
    def vertices(self) -> tuple[int, ...]:
        out = []
        b, v = self.bits, 1
        while b:
            if b & 1:
                out.append(v)
            b >>= 1
            v += 1
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, v: int) -> bool:
        return v >= 1 and bool(self.bits >> (v - 1) & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: "Face") -> "Face":
        return Face(self.bits | other.bits)

    def __and__(self, other: "Face") -> "Face":
        return Face(self.bits & other.bits)

    def __sub__(self, other: "Face") -> "Face":
        return Face(self.bits & ~other.bits)

    # <= and < are the subset order, so sort with ``sort_key`` instead.
    def __le__(self, other: "Face") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Face") -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: "Face") -> bool:
        return other <= self

    def __gt__(self, other: "Face") -> bool:
        return other < self

    def isdisjoint(self, other: "Face") -> bool:
        return self.bits & other.bits == 0

    def with_vertex(self, v: int) -> "Face":
        return Face(self.bits | 1 << (v - 1))

    def without_vertex(self, v: int) -> "Face":
        return Face(self.bits & ~(1 << (v - 1)))

    def subsets(self) -> Iterator["Face"]:
        """All subfaces, including the empty face and the face itself."""
        sub = self.bits
        while True:
            yield Face(sub)
            if sub == 0:
                return
            sub = (sub - 1) & self.bits

    def sort_key(self) -> tuple[int, ...]:
        return self.vertices

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.vertices)) + "}"


def face_sort_key(f: Face):
    return f.sort_key()


def sorted_faces(faces: Iterable[Face]) -> list[Face]:
    return sorted(faces, key=face_sort_key)


def all_subsets(n: int) -> list[Face]:
    """Every subset of ``[n]`` in lexicographic vertex order."""
    return sorted_faces(Face(b) for b in range(1 << n))


@dataclass(frozen=True)
class SimplicialComplex:
    """A downward-closed family of faces of ``[n]`` containing the empty face.

    By default every singleton ``{i}`` must be a face; pass
    ``vertex_complete=False`` to allow ghost coordinates.
    """

    n: int
    faces: frozenset[Face]
    vertex_complete: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise InputError(f"n must lie in [0, {MAX_VERTICES}], got {self.n}")
        full = (1 << self.n) - 1
        if Face() not in self.faces:
            raise InputError("a simplicial complex must contain the empty face")
        for f in self.faces:
            if f.bits & ~full:
                raise InputError(f"face {f} is not a subset of [{self.n}]")
            for v in f:
                if f.without_vertex(v) not in self.faces:
                    raise InputError(f"not downward closed: {f} lacks facet {f.without_vertex(v)}")
        if self.vertex_complete:
            missing = [i for i in range(1, self.n + 1) if Face.of(i) not in self.faces]
            if missing:
                raise InputError(f"vertices {missing} are not faces (pass vertex_complete=False)")

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]], vertex_complete: bool = True):
        return closure([Face.from_iterable(f) for f in facets], n, vertex_complete=vertex_complete)

    def __contains__(self, face: Face) -> bool:
        return face in self.faces

    def __iter__(self) -> Iterator[Face]:
        return iter(sorted_faces(self.faces))

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def vertices(self) -> tuple[int, ...]:
        bits = 0
        for f in self.faces:
            bits |= f.bits
        return Face(bits).vertices

    def facets(self) -> list[Face]:
        """Maximal faces, lexicographically sorted."""
        out = [f for f in self.faces if not any(f < g for g in self.faces)]
        return sorted_faces(out)

    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def to_json(self) -> str:
        facets = [list(f.vertices) for f in self.facets() if f]
        data = {"n": self.n, "facets": facets}
        if not self.vertex_complete:
            data["vertex_complete"] = False
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str, vertex_complete: bool = True) -> "SimplicialComplex":
        try:
            data = json.loads(text)
            n = int(data["n"])
            facets = [[int(v) for v in f] for f in data.get("facets", [])]
            vertex_complete = bool(data.get("vertex_complete", vertex_complete))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad complex file: {exc}") from exc
        for f in facets:
            if any(not 1 <= v <= n for v in f):
                raise InputError(f"facet {f} has a vertex outside [1, {n}]")
        return cls.from_facets(n, facets, vertex_complete=vertex_complete)

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, facets={self.facets()})"


def closure(faces: Iterable[Face], n: int | None = None, vertex_complete: bool = False) -> SimplicialComplex:
    """Smallest downward-closed family containing ``faces`` and the empty face."""
    faces = list(faces)
    if n is None:
        bits = 0
        for f in faces:
            bits |= f.bits
        n = bits.bit_length()
    out = {Face()}
    for f in faces:
        out.update(f.subsets())
    return SimplicialComplex(n, frozenset(out), vertex_complete=vertex_complete)


def _require_face(K: SimplicialComplex, sigma: Face):
    if sigma not in K:
        raise NotAFace(f"{sigma} is not a face of {K}")


def star(K: SimplicialComplex, sigma: Face) -> set[Face]:
    _require_face(K, sigma)
    return {tau for tau in K.faces if sigma <= tau}


def link(K: SimplicialComplex, sigma: Face) -> SimplicialComplex:
    """Faces disjoint from ``sigma`` whose union with it is still a face.

    Vertices keep their labels; the result is generally not vertex complete.
    """
    _require_face(K, sigma)
    faces = frozenset(tau for tau in K.faces if tau.isdisjoint(sigma) and (tau | sigma) in K)
    return SimplicialComplex(K.n, faces, vertex_complete=False)


def link_vertices(K: SimplicialComplex, sigma: Face) -> tuple[int, ...]:
    _require_face(K, sigma)
    return tuple(v for v in range(1, K.n + 1) if v not in sigma and sigma.with_vertex(v) in K)


def restrict(K: SimplicialComplex, I: Face) -> SimplicialComplex:
    """``{tau in K : tau ⊆ I}`` re-indexed onto ``[|I|]`` in increasing order."""
    index = {v: k for k, v in enumerate(I.vertices, start=1)}
    faces = frozenset(Face.from_iterable(index[v] for v in tau) for tau in K.faces if tau <= I)
    return SimplicialComplex(len(I), faces, vertex_complete=False)


def cone(K: SimplicialComplex) -> SimplicialComplex:
    apex = Face.of(K.n + 1)
    faces = set(K.faces) | {tau | apex for tau in K.faces}
    return SimplicialComplex(K.n + 1, frozenset(faces), vertex_complete=K.vertex_complete)


def nonface_distance(K: SimplicialComplex, I: Face) -> int:
    """Fewest vertices to delete from ``I`` to land in ``K``."""
    return len(I) - max(len(tau) for tau in K.faces if tau <= I)


@dataclass(frozen=True)
class SignedComponent:
    """A face together with a sign on each of its link vertices.

    Labels one connected component of the smooth part of the stratum
    over ``sigma``.
    """

    sigma: Face
    signs: tuple[tuple[int, int], ...]

    def sign(self, v: int) -> int:
        return dict(self.signs)[v]

    @property
    def negative(self) -> Face:
        return Face.from_iterable(v for v, s in self.signs if s < 0)

    def sample_point(self, n: int, epsilon: float = 0.1):
        """A base/fiber pair ``(x, y)`` inside the component."""
        signs = dict(self.signs)
        x = [0.0 if i in self.sigma else float(signs.get(i, 1)) for i in range(1, n + 1)]
        y = [(2 * epsilon) ** 0.5 if i in self.sigma else 0.0 for i in range(1, n + 1)]
        return x, y

    def __repr__(self) -> str:
        s = "".join(f"{v}{'+' if e > 0 else '-'}" for v, e in self.signs)
        return f"L[{self.sigma!r};{s}]"


def components(K: SimplicialComplex) -> list[SignedComponent]:
    out = []
    for sigma in K:
        lk = link_vertices(K, sigma)
        for signs in product((1, -1), repeat=len(lk)):
            out.append(SignedComponent(sigma, tuple(zip(lk, signs))))
    return out


def enumerate_complexes(n: int, vertex_complete: bool = True) -> list[SimplicialComplex]:
    """Every simplicial complex on ``[n]`` (vertex complete by default).

    Only practical for ``n <= 4``.
    """
    if n > 5:
        raise InputError("exhaustive enumeration is limited to n <= 5")
    base = [Face()] + ([Face.of(i) for i in range(1, n + 1)] if vertex_complete else [])
    candidates = [f for f in all_subsets(n) if f not in base]
    candidates.sort(key=lambda f: (len(f), f.sort_key()))
    found: list[frozenset[Face]] = []

    def grow(k: int, faces: set[Face]):
        if k == len(candidates):
            found.append(frozenset(faces))
            return
        grow(k + 1, faces)
        f = candidates[k]
        if all(f.without_vertex(v) in faces for v in f):
            faces.add(f)
            grow(k + 1, faces)
            faces.remove(f)

    grow(0, set(base))
    return [SimplicialComplex(n, fs, vertex_complete=vertex_complete) for fs in found]


def full_simplex(n: int) -> SimplicialComplex:
    return closure([Face.full(n)], n, vertex_complete=True)


def boundary_of_simplex(n: int) -> SimplicialComplex:
    full = Face.full(n)
    return closure([full.without_vertex(v) for v in range(1, n + 1)], n, vertex_complete=True)


def discrete(n: int) -> SimplicialComplex:
    """The vertices of ``[n]`` with no edges."""
    return closure([Face.of(i) for i in range(1, n + 1)], n, vertex_complete=True)


def empty_complex(n: int) -> SimplicialComplex:
    """``{∅}`` on ``n`` coordinates; not vertex complete for ``n > 0``."""
    return SimplicialComplex(n, frozenset({Face()}), vertex_complete=n == 0)


def faces_of_size(n: int, k: int) -> list[Face]:
    return [Face.from_iterable(c) for c in combinations(range(1, n + 1), k)]
