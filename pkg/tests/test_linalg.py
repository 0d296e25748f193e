from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pstneps.linalg import (
    DimensionError,
    add,
    as_matrix,
    complete_graph_adjacency,
    conj_transpose,
    identity,
    is_symmetric,
    is_unitary,
    kron,
    kron_all,
    matmul,
    max_norm_diff,
    norm1,
    scale,
)


def schoolbook(a, b):
    n, k = len(a), len(b[0])
    out = [[0j] * k for _ in range(n)]
    for i in range(n):
        for j in range(k):
            out[i][j] = sum(a[i][s] * b[s][j] for s in range(len(b)))
    return np.array(out)


def kron_by_blocks(a, b):
    p, q = b.shape
    out = np.zeros((a.shape[0] * p, a.shape[1] * q), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i * p:(i + 1) * p, j * q:(j + 1) * q] = a[i, j] * b
    return out


small_ints = st.integers(-3, 3)


def int_square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n).map(np.array)


def test_kron_k2_k2_is_antidiagonal():
    k2 = complete_graph_adjacency(2)
    expected = np.fliplr(np.eye(4))
    assert np.array_equal(kron(k2, k2), expected)


@given(int_square(2), int_square(3))
def test_kron_matches_block_definition(a, b):
    assert np.array_equal(kron(a, b), kron_by_blocks(a, b))


@settings(max_examples=50)
@given(int_square(2), int_square(2), int_square(3), int_square(3))
def test_kron_mixed_product(a, c, b, d):
    lhs = matmul(kron(a, b), kron(c, d))
    rhs = kron(matmul(a, c), matmul(b, d))
    assert max_norm_diff(lhs, rhs) <= 1e-12


@given(int_square(2), int_square(2), int_square(2))
def test_kron_associative(a, b, c):
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))
    assert np.array_equal(kron_all([a, b, c]), kron(a, kron(b, c)))


@given(int_square(4), int_square(4))
def test_matmul_against_schoolbook(a, b):
    assert np.array_equal(matmul(a, b), schoolbook(a.tolist(), b.tolist()))


def test_shape_checks():
    with pytest.raises(DimensionError):
        matmul(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        add(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        max_norm_diff(np.eye(2), np.eye(3))


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf]])


def test_unitary_checks():
    assert is_unitary(identity(5))
    k2 = complete_graph_adjacency(2)
    assert is_unitary(k2)
    rot = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]])
    assert is_unitary(rot)
    assert not is_unitary(2 * identity(3))
    assert not is_unitary(complete_graph_adjacency(3))


def test_small_helpers():
    a = np.array([[1, 2j], [3, 4]])
    assert np.array_equal(conj_transpose(a), np.array([[1, 3], [-2j, 4]]))
    assert np.array_equal(scale(2, a), 2 * a)
    assert norm1(a) == 6.0
    assert is_symmetric(complete_graph_adjacency(4))
    assert not is_symmetric(a)
    assert np.array_equal(complete_graph_adjacency(3), np.ones((3, 3)) - np.eye(3))
