import pytest
import sympy
from hypothesis import given, strategies as st

from rforms.linalg import (QMatrix, ShapeError, SingularMatrix, SpanEchelon, flip, inverse, kernel_basis, kron,
                           leg_embed, rank, rank_at)
from rforms.scalar import ONE, Q, ZERO, Scalar
from conftest import to_sympy

small = st.sampled_from([ZERO, ONE, -ONE, Q, Q.inverse(), Q - ONE, Scalar(2), Q + Q.inverse()])


def dense(n, m):
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)


def as_sym(M):
    return sympy.Matrix([[to_sympy(v) for v in row] for row in M.to_dense()])


@given(dense(3, 3))
def test_rank_matches_sympy(rows):
    M = QMatrix.from_dense(rows)
    assert rank(M) == as_sym(M).rank(simplify=True)


@given(dense(3, 3))
def test_inverse_or_singular(rows):
    M = QMatrix.from_dense(rows)
    I = QMatrix.identity(3)
    try:
        Mi = inverse(M)
    except SingularMatrix:
        assert rank(M) < 3
        return
    assert M @ Mi == I and Mi @ M == I


@given(dense(2, 4))
def test_kernel_vectors_are_killed(rows):
    M = QMatrix.from_dense(rows)
    ker = kernel_basis(M)
    assert len(ker) == 4 - rank(M)
    for v in ker:
        col = QMatrix.from_entries(4, 1, [(k, 0, x) for k, x in v.items()])
        assert (M @ col).is_zero()


@given(dense(3, 3))
def test_rank_at_is_a_lower_bound(rows):
    M = QMatrix.from_dense(rows)
    assert rank_at(M) <= rank(M)


def test_flip_and_legs():
    P = flip(2)
    assert P @ P == QMatrix.identity((2, 2))
    A = QMatrix.from_dense([[1, 2], [3, 4]])
    B = QMatrix.from_dense([[0, 1], [1, 0]])
    AB = kron(A, B)
    assert P @ AB @ P == kron(B, A)
    X = QMatrix.from_dense([[Q if i == j else ZERO for j in range(4)] for i in range(4)], (2, 2), (2, 2))
    assert leg_embed(X, (1, 2), 3, 2) == kron(X, QMatrix.identity(2))
    with pytest.raises(ShapeError):
        leg_embed(X, (1, 3), 3, 2)


def test_partial_transpose_is_an_involution():
    M = QMatrix.from_dense([[i * 4 + j for j in range(4)] for i in range(4)], (2, 2), (2, 2))
    assert M.partial_transpose(1).partial_transpose(1) == M
    assert M.partial_transpose(1) != M


@given(st.lists(st.dictionaries(st.integers(0, 4), small, max_size=3), max_size=4), st.dictionaries(st.integers(0, 4), small, max_size=3))
def test_span_membership_matches_rank(vecs, probe):
    ech = SpanEchelon()
    for v in vecs:
        ech.add(v)
    inside = ech.contains(probe)
    rows = [{k: x for k, x in v.items() if x} for v in vecs]
    assert inside == (rank(rows + [probe]) == rank(rows))
