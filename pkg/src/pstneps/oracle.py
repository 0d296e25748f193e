"""Brute-force ``exp(-i t A)`` by scaled Taylor summation.

This is deliberately independent of :mod:`pstneps.spectral`: it sees only the
adjacency matrix and plain matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angle import Time, radians
from .linalg import DTYPE, ORACLE_TOL, as_matrix, max_norm_diff, norm1
from .neps import NepsSpec, neps_adjacency


class SeriesDivergenceError(RuntimeError):
    """Taylor series did not reach ``series_tol`` within ``max_terms`` terms."""


@dataclass(frozen=True)
class OracleConfig:
    series_tol: float = 1e-12
    max_terms: int = 256
    scaling_threshold: float = 1.0

    def __post_init__(self):
        if self.series_tol <= 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 16:
            raise ValueError("max_terms must be >= 16")
        if self.scaling_threshold <= 0:
            raise ValueError("scaling_threshold must be positive")


DEFAULT_CONFIG = OracleConfig()


def expm_series(a, t: Time, cfg: OracleConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``exp(-i t a)`` by scaling and squaring around a truncated Taylor series."""
    a = as_matrix(a)
    tau = radians(t)
    if not math.isfinite(tau):
        raise ValueError("time must be finite")
    n = a.shape[0]
    x = (-1j * tau) * a
    norm = norm1(x)
    s = 0 if norm <= cfg.scaling_threshold else math.ceil(math.log2(norm / cfg.scaling_threshold))
    x = x / 2.0**s

    result = np.eye(n, dtype=DTYPE)
    term = np.eye(n, dtype=DTYPE)
    for k in range(1, cfg.max_terms + 1):
        term = term @ x / k
        result += term
        if norm1(term) < cfg.series_tol:
            break
    else:
        raise SeriesDivergenceError(f"series did not converge in {cfg.max_terms} terms")

    for _ in range(s):
        result = result @ result
    return result


@dataclass(frozen=True)
class Certificate:
    passed: bool
    deviation: float
    tol: float


def certify(spec: NepsSpec, t: Time, analytic, tol: float = ORACLE_TOL,
            cfg: OracleConfig = DEFAULT_CONFIG, adjacency=None) -> Certificate:
    """Compare an analytic transition matrix against the series oracle."""
    adj = neps_adjacency(spec) if adjacency is None else adjacency
    dev = max_norm_diff(analytic, expm_series(adj, t, cfg))
    return Certificate(dev <= tol, dev, tol)
