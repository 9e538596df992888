"""Exact sparse linear algebra over Q or a prime field.

Matrices are dictionaries of nonzero entries.  Rank uses incremental sparse
row echelon form: fraction-free integer elimination over Q (rows are kept
primitive to stop coefficient growth) and plain modular elimination over F_p.
"""
from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import NotAComplex

DEFAULT_PRIME = 32003

# sparse vector: {index: coefficient}, zeros omitted
Vector = dict


@dataclass(frozen=True)
class Field:
    """Ground field: ``p = 0`` means the rationals."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def convert(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def __str__(self) -> str:
        return "Q" if self.p == 0 else f"F_{self.p}"

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """``"q"`` or ``"fp:P"``."""
        spec = spec.strip().lower()
        if spec in ("q", "qq", "rational"):
            return cls(0)
        if spec.startswith("fp:"):
            return cls(int(spec[3:]))
        if spec == "fp":
            return cls(DEFAULT_PRIME)
        raise ValueError(f"unknown field {spec!r}; use 'q' or 'fp:P'")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


QQ = Field(0)
_current_field: contextvars.ContextVar[Field] = contextvars.ContextVar("skeleta_field", default=QQ)


def current_field() -> Field:
    return _current_field.get()


@contextmanager
def use_field(f: Field):
    token = _current_field.set(f)
    try:
        yield f
    finally:
        _current_field.reset(token)


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v != 0:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v != 0})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        return cls(rows, len(columns), {(r, c): v for c, col in enumerate(columns) for r, v in col.items()})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, k: int) -> "SparseMatrix":
        return cls(k, k, {(i, i): 1 for i in range(k)})

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        other_rows = other.row_dicts()
        out: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in other_rows[k].items():
                key = (i, j)
                s = out.get(key, 0) + v * w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SparseMatrix(self.rows, other.cols, out)

    def reduce_mod(self, p: int) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: Field(p).convert(v) for k, v in self.entries.items()})

    def is_zero(self, f: Field | None = None) -> bool:
        f = f or current_field()
        return all(f.convert(v) == 0 for v in self.entries.values())


# --- elimination -----------------------------------------------------------

class Echelon:
    """Incrementally maintained sparse row echelon basis.

    ``add`` inserts a vector and reports whether it enlarged the span.
    Pivots are the smallest index of each stored row.
    """

    def __init__(self, f: Field | None = None):
        self.field = f or current_field()
        self.pivots: dict[int, dict] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def _normalize(self, vec: Mapping) -> dict:
        f = self.field
        if f.p:
            return {k: v % f.p for k, v in ((k, f.convert(v)) for k, v in vec.items()) if v % f.p}
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in vec.values()):
            den = 1
            for v in vec.values():
                den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
            vec = {k: Fraction(v) * den for k, v in vec.items()}
        return {k: int(v) for k, v in vec.items() if v != 0}

    def reduce(self, vec: Mapping) -> dict:
        """Remainder of ``vec`` after elimination against stored pivots."""
        row = self._normalize(vec)
        p = self.field.p
        pivots = self.pivots
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = min(hits)
            prow = pivots[c]
            a = row[c]
            if p:
                # stored rows are monic at the pivot
                for k, v in prow.items():
                    nv = (row.get(k, 0) - a * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            else:
                b = prow[c]
                g = gcd(a, b)
                ma, mb = b // g, a // g
                new = {k: v * ma for k, v in row.items()}
                for k, v in prow.items():
                    nv = new.get(k, 0) - mb * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = _primitive(new)
        return row

    def add(self, vec: Mapping) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        c = min(row)
        if self.field.p:
            inv = pow(row[c], -1, self.field.p)
            row = {k: v * inv % self.field.p for k, v in row.items()}
        else:
            row = _primitive(row)
        self.pivots[c] = row
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def rank(M: SparseMatrix, f: Field | None = None) -> int:
    """Rank over ``f`` (default: the current field, Q unless overridden)."""
    rows = M.row_dicts() if M.rows <= M.cols else M.column_dicts()
    ech = Echelon(f)
    rows.sort(key=len)
    for r in rows:
        if r:
            ech.add(r)
    return len(ech)


def rank_of_vectors(vectors: Iterable[Mapping], f: Field | None = None) -> int:
    ech = Echelon(f)
    for v in vectors:
        if v:
            ech.add(v)
    return len(ech)


def homology_dims(d_list: Sequence[SparseMatrix], f: Field | None = None, check: bool = True) -> list[int]:
    """Cohomology dimensions of ``C^0 -> C^1 -> ... -> C^k``.

    ``d_list[i]`` maps ``C^i`` to ``C^{i+1}``, so it has shape
    ``(dim C^{i+1}, dim C^i)``.  Returns ``k + 1`` dimensions.
    """
    if not d_list:
        return []
    for a, b in zip(d_list, d_list[1:]):
        if a.rows != b.cols:
            raise ValueError(f"maps are not composable: {a.shape} then {b.shape}")
    if check:
        for i, (a, b) in enumerate(zip(d_list, d_list[1:])):
            if not (b @ a).is_zero(f):
                raise NotAComplex(f"d_{i + 1} ∘ d_{i} != 0")
    dims = [d.cols for d in d_list] + [d_list[-1].rows]
    ranks = [rank(d, f) for d in d_list]
    out = []
    for i, dim in enumerate(dims):
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i > 0 else 0
        out.append(dim - r_out - r_in)
    return out


# --- exact solving (used for cohomology bases, small systems only) ----------

def _to_fraction_rows(M: SparseMatrix) -> list[dict]:
    return [{c: Fraction(v) for c, v in r.items()} for r in M.row_dicts()]


def rref(M: SparseMatrix) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form over Q: (nonzero rows, pivot columns)."""
    rows = [r for r in _to_fraction_rows(M) if r]
    pivots: list[int] = []
    out: list[dict] = []
    for col in range(M.cols):
        k = next((i for i, r in enumerate(rows) if col in r), None)
        if k is None:
            continue
        prow = rows.pop(k)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        def elim(r):
            a = r.get(col)
            if a is None:
                return r
            new = dict(r)
            for c, v in prow.items():
                nv = new.get(c, 0) - a * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            return new
        rows = [r for r in (elim(r) for r in rows) if r]
        out = [elim(r) for r in out]
        out.append(prow)
        pivots.append(col)
    return out, pivots


def kernel_basis(M: SparseMatrix) -> list[dict]:
    """Basis of the right null space of ``M`` over Q, as sparse vectors."""
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for r, pc in zip(rows, pivots):
            v = r.get(free)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def solve_in_span(vectors: Sequence[Mapping], target: Mapping) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target`` over Q, or None."""
    keys = sorted({k for v in vectors for k in v} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    n = len(vectors)
    # augmented system: rows indexed by coordinates, columns by vectors + rhs
    entries = {}
    for j, v in enumerate(vectors):
        for k, x in v.items():
            entries[(index[k], j)] = x
    for k, x in target.items():
        entries[(index[k], n)] = x
    rows, pivots = rref(SparseMatrix(len(keys), n + 1, entries))
    if n in pivots:
        return None
    coeffs = [Fraction(0)] * n
    for r, pc in zip(rows, pivots):
        coeffs[pc] = r.get(n, Fraction(0))
    return coeffs


def apply(M: SparseMatrix, vec: Mapping) -> dict:
    cols = M.column_dicts()
    out: dict = {}
    for c, x in vec.items():
        for r, v in cols[c].items():
            nv = out.get(r, 0) + v * x
            if nv:
                out[r] = nv
            else:
                out.pop(r, None)
    return out


def axpy(out: dict, a, vec: Mapping) -> dict:
    """``out += a * vec`` in place, dropping zeros."""
    for k, v in vec.items():
        nv = out.get(k, 0) + a * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out
