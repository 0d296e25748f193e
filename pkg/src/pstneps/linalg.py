"""Dense complex matrix helpers and Kronecker algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every function
here is pure; inputs are never modified.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable

import numpy as np

DTYPE = np.complex128

# analytic-vs-analytic and analytic-vs-oracle comparison defaults
ANALYTIC_TOL = 1e-9
ORACLE_TOL = 1e-6


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible."""


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a square, finite complex matrix (a copy)."""
    a = np.array(m, dtype=DTYPE)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError("identity size must be >= 1")
    return np.eye(n, dtype=DTYPE)


def _check_same(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(np.asarray(a, dtype=DTYPE), np.asarray(b, dtype=DTYPE))


def kron_all(mats: Iterable) -> np.ndarray:
    """Left-to-right Kronecker product of a non-empty sequence."""
    mats = list(mats)
    if not mats:
        raise ValueError("kron_all needs at least one factor")
    return reduce(kron, mats)


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    _check_same(a, b)
    return a @ b


def add(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    _check_same(a, b)
    return a + b


def scale(k: complex, a) -> np.ndarray:
    return complex(k) * np.asarray(a, dtype=DTYPE)


def conj_transpose(a) -> np.ndarray:
    return np.asarray(a, dtype=DTYPE).conj().T


def max_norm_diff(a, b) -> float:
    """Largest entrywise modulus of ``a - b``."""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    _check_same(a, b)
    return float(np.max(np.abs(a - b)))


def is_unitary(m, tol: float = ANALYTIC_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m, dtype=DTYPE)
    return max_norm_diff(m @ conj_transpose(m), np.eye(m.shape[0])) <= tol


def is_symmetric(m, tol: float = ANALYTIC_TOL) -> bool:
    m = np.asarray(m, dtype=DTYPE)
    return max_norm_diff(m, m.T) <= tol


def norm1(m) -> float:
    """Induced 1-norm (max absolute column sum)."""
    return float(np.max(np.sum(np.abs(np.asarray(m)), axis=0)))


def complete_graph_adjacency(n: int) -> np.ndarray:
    return np.ones((n, n), dtype=DTYPE) - np.eye(n, dtype=DTYPE)
