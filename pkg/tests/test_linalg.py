from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeleta.errors import NotAComplex
from skeleta.linalg import (DEFAULT_PRIME, QQ, Field, SparseMatrix, apply, current_field, homology_dims,
                            kernel_basis, rank, rank_of_vectors, solve_in_span, use_field)


def oracle_rank(rows, p=0):
    """Dense Gaussian elimination, written independently of the library."""
    A = [[Fraction(x) if not p else x % p for x in r] for r in rows]
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p) if p else 1 / A[r][c]
        for i in range(len(A)):
            if i != r and A[i][c]:
                t = A[i][c] * inv
                A[i] = [(x - t * y) % p if p else x - t * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


small_ints = st.integers(-3, 3)
matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_matches_oracle_over_q(rows):
    M = SparseMatrix.from_dense(rows)
    assert rank(M) == oracle_rank(rows) == int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


@given(matrices, st.sampled_from([2, 3, 7, DEFAULT_PRIME]))
@settings(max_examples=150, deadline=None)
def test_rank_matches_oracle_mod_p(rows, p):
    assert rank(SparseMatrix.from_dense(rows), Field(p)) == oracle_rank(rows, p)


def test_rank_can_drop_mod_p():
    M = SparseMatrix.from_dense([[1, 1], [1, 3]])
    assert rank(M) == 2
    assert rank(M, Field(2)) == 1


def test_field_parse_and_context():
    assert Field.parse("q") == QQ
    assert Field.parse("fp:7").p == 7
    assert Field.parse("fp").p == DEFAULT_PRIME
    with pytest.raises(ValueError):
        Field.parse("fp:8")
    with pytest.raises(ValueError):
        Field.parse("reals")
    assert current_field() == QQ
    with use_field(Field(5)):
        assert current_field().p == 5
        assert rank(SparseMatrix.from_dense([[5]])) == 0
    assert current_field() == QQ


def test_sparse_matrix_basics():
    M = SparseMatrix.from_dense([[1, 0, 2], [0, 0, 3]])
    assert M.shape == (2, 3) and M.nnz == 3
    assert M.transpose().to_dense() == [[1, 0], [0, 0], [2, 3]]
    assert (M @ SparseMatrix.identity(3)).to_dense() == M.to_dense()
    assert SparseMatrix.zero(2, 2).is_zero()
    assert apply(M, {2: 1}) == {0: 2, 1: 3}
    with pytest.raises(IndexError):
        SparseMatrix(1, 1, {(1, 0): 1})


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_kernel_basis(rows):
    M = SparseMatrix.from_dense(rows)
    K = kernel_basis(M)
    assert len(K) == M.cols - rank(M)
    for v in K:
        assert apply(M, v) == {}
    assert rank_of_vectors(K) == len(K)


@given(matrices, st.lists(small_ints, min_size=7, max_size=7))
@settings(max_examples=80, deadline=None)
def test_solve_in_span(rows, coeffs):
    cols = SparseMatrix.from_dense(rows).column_dicts()
    target = {}
    for c, v in zip(coeffs, cols):
        for k, x in v.items():
            target[k] = target.get(k, 0) + c * x
    target = {k: x for k, x in target.items() if x}
    sol = solve_in_span(cols, target)
    assert sol is not None
    got = {}
    for c, v in zip(sol, cols):
        for k, x in v.items():
            got[k] = got.get(k, 0) + c * x
    assert {k: x for k, x in got.items() if x} == target


def test_solve_in_span_rejects():
    assert solve_in_span([{0: 1}], {1: 1}) is None


def test_homology_dims_circle():
    # simplicial cochains of the triangle boundary: H^0 = H^1 = 1
    d0 = SparseMatrix.from_dense([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    assert homology_dims([d0]) == [1, 1]


def test_homology_dims_rejects_non_complex():
    d = SparseMatrix.from_dense([[1]])
    with pytest.raises(NotAComplex):
        homology_dims([d, d])
    with pytest.raises(ValueError):
        homology_dims([SparseMatrix.zero(2, 1), SparseMatrix.zero(1, 1)])


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_euler_characteristic_of_random_complex(a, b, c, rnd):
    # d1 ∘ d0 = 0 by building d1 from the left kernel of d0
    d0 = SparseMatrix.from_dense([[rnd.randint(-2, 2) for _ in range(a)] for _ in range(b)]) if a and b \
        else SparseMatrix.zero(b, a)
    left = kernel_basis(d0.transpose())
    rows = [[v.get(i, 0) for i in range(b)] for v in left[:c]] + [[0] * b] * max(0, c - len(left))
    d1 = SparseMatrix.from_dense(rows) if b and c else SparseMatrix.zero(c, b)
    h = homology_dims([d0, d1])
    assert h[0] - h[1] + h[2] == a - b + c
    assert all(x >= 0 for x in h)
