"""Analytic transition matrices ``exp(-i t A)`` for NEPS of complete graphs.

Every spectrum here is integral, so decompositions key projectors on exact
integer eigenvalues.  Two independent analytic routes are provided:

* the product route, multiplying the transition matrices of the single-vector
  graphs ``NEPS(...; {a})`` over the basis (they commute), and
* the full-spectrum route, enumerating one factor eigenvalue per coordinate.

Closed forms at the special times ``2*pi/h``, ``pi/2``, ``pi`` and ``2*pi`` are
in :func:`closed_form`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .angle import RationalAngle, Time, phase, scale_time
from .linalg import ANALYTIC_TOL, DTYPE, identity, kron, kron_all, max_norm_diff
from .neps import (
    Bits,
    NepsSpec,
    c_of,
    check_size,
    embed,
    fiber,
    hamming_weight,
    project_star,
    restrict,
    shift_matrix,
    split_parts,
)


class HypothesisError(ValueError):
    """The requested closed form does not apply to this spec."""


class PathMismatchError(AssertionError):
    """Two analytic routes disagree; indicates an engine bug."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FactorSpectrum:
    """Spectral data of ``K_n``: ``A = -E1 + (n-1) E2`` with ``E2 = J/n``."""

    n: int
    eigenvalues: tuple[int, int]
    projectors: tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=None)
def factor_spectrum(n: int) -> FactorSpectrum:
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    e2 = np.full((n, n), 1.0 / n, dtype=DTYPE)
    e1 = np.eye(n, dtype=DTYPE) - e2
    return FactorSpectrum(n, (-1, n - 1), (_frozen(e1), _frozen(e2)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = sum(lam * E)`` over ``components``, eigenvalues distinct integers."""

    components: tuple[tuple[int, np.ndarray], ...]

    @property
    def eigenvalues(self) -> tuple[int, ...]:
        return tuple(lam for lam, _ in self.components)

    @property
    def dim(self) -> int:
        return self.components[0][1].shape[0]

    def multiplicities(self) -> dict[int, int]:
        return {lam: int(round(np.trace(e).real)) for lam, e in self.components}

    def matrix(self) -> np.ndarray:
        return sum((lam * e for lam, e in self.components), np.zeros((self.dim,) * 2, DTYPE))

    def transition(self, t: Time) -> np.ndarray:
        out = np.zeros((self.dim,) * 2, dtype=DTYPE)
        for lam, e in self.components:
            out += phase(lam, t) * e
        return out


def _merge(pairs: Iterable[tuple[int, np.ndarray]]) -> SpectralDecomposition:
    merged: dict[int, np.ndarray] = {}
    for lam, e in pairs:
        lam = int(lam)
        if lam in merged:
            merged[lam] = merged[lam] + e
        else:
            merged[lam] = np.array(e, dtype=DTYPE)
    return SpectralDecomposition(tuple((lam, _frozen(merged[lam])) for lam in sorted(merged)))


@lru_cache(maxsize=256)
def _single_components(factors: tuple[int, ...], a: Bits) -> SpectralDecomposition:
    active = [i for i, ai in enumerate(a) if ai]
    pairs = []
    for choice in itertools.product((0, 1), repeat=len(active)):
        pick = dict(zip(active, choice))
        lam = 1
        mats = []
        for i, n in enumerate(factors):
            if i in pick:
                fs = factor_spectrum(n)
                lam *= fs.eigenvalues[pick[i]]
                mats.append(fs.projectors[pick[i]])
            else:
                mats.append(identity(n))
        pairs.append((lam, kron_all(mats)))
    return _merge(pairs)


def single_a_decomposition(spec: NepsSpec, a: Sequence[int]) -> SpectralDecomposition:
    """Decomposition of the adjacency of ``NEPS(K_n1, ..., K_nm; {a})``."""
    a = tuple(int(x) for x in a)
    if len(a) != spec.m:
        raise ValueError("basis vector length does not match the factor count")
    if not any(a):
        raise ValueError("basis vector must be nonzero")
    check_size(spec)
    return _single_components(spec.factors, a)


def eigenvalue_for_choice(spec: NepsSpec, choice: Sequence[int]) -> int:
    """Eigenvalue of the whole NEPS when coordinate ``i`` takes factor eigenvalue ``choice[i]``."""
    lams = [factor_spectrum(n).eigenvalues[j] for n, j in zip(spec.factors, choice)]
    return sum(math.prod(lam ** ai for lam, ai in zip(lams, a)) for a in spec.basis)


def full_decomposition(spec: NepsSpec) -> SpectralDecomposition:
    """Decomposition of the whole NEPS adjacency, one factor eigenspace per coordinate."""
    check_size(spec)
    pairs = []
    for choice in itertools.product((0, 1), repeat=spec.m):
        mats = [factor_spectrum(n).projectors[j] for n, j in zip(spec.factors, choice)]
        pairs.append((eigenvalue_for_choice(spec, choice), kron_all(mats)))
    return _merge(pairs)


def neps_spectrum(spec: NepsSpec) -> dict[int, int]:
    """Eigenvalue -> multiplicity, computed combinatorially (no matrices)."""
    mult: Counter[int] = Counter()
    for choice in itertools.product((0, 1), repeat=spec.m):
        rank = math.prod(n - 1 if j == 0 else 1 for n, j in zip(spec.factors, choice))
        mult[eigenvalue_for_choice(spec, choice)] += rank
    return dict(sorted(mult.items()))


def transition_single_a(spec: NepsSpec, a: Sequence[int], t: Time) -> np.ndarray:
    return single_a_decomposition(spec, a).transition(t)


def transition_product(spec: NepsSpec, t: Time, order: Sequence[int] | None = None) -> np.ndarray:
    """Product over the basis of single-vector transition matrices."""
    check_size(spec)
    basis = spec.basis if order is None else [spec.basis[k] for k in order]
    out = None
    for a in basis:
        h = transition_single_a(spec, a, t)
        out = h if out is None else out @ h
    return out


def transition_full(spec: NepsSpec, t: Time) -> np.ndarray:
    return full_decomposition(spec).transition(t)


def transition(spec: NepsSpec, t: Time, verify_paths: bool = False, tol: float = ANALYTIC_TOL) -> np.ndarray:
    h = transition_product(spec, t)
    if verify_paths:
        dev = max_norm_diff(h, transition_full(spec, t))
        if dev > tol:
            raise PathMismatchError(f"product and full-spectrum paths differ by {dev:.3e} at t={t}")
    return h


def lift_transition(h, left_id: int, right_id: int) -> np.ndarray:
    """``I_left (x) h (x) I_right``."""
    if left_id < 1 or right_id < 1:
        raise ValueError("identity sizes must be >= 1")
    return kron(kron(identity(left_id), h), identity(right_id))


def tensor_transition(gdecomp: SpectralDecomposition, h_of: Callable[[Time], np.ndarray], t: Time) -> np.ndarray:
    """Transition of a tensor product ``G x H``: ``sum_r E_r (x) H_H(lambda_r t)``."""
    out = None
    for lam, e in gdecomp.components:
        term = kron(e, h_of(scale_time(t, lam)))
        out = term if out is None else out + term
    return out


# closed forms ----------------------------------------------------------------

@dataclass(frozen=True)
class PhaseRecord:
    """Closed form ``phase * S`` where ``S`` shifts every vertex by ``shift``."""

    form: str
    time: RationalAngle
    phase: complex
    shift: Bits

    @property
    def is_scalar(self) -> bool:
        return not any(self.shift)


SPECIAL_TIMES = ("2pi/h", "pi/2", "pi", "2pi")

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


def i_pow(k: int) -> complex:
    """``i ** k`` exactly."""
    return _I_POW[k % 4]


def sign(k: int) -> int:
    return -1 if k % 2 else 1


def delta_phase_table(spec: NepsSpec) -> complex:
    """Scalar in ``H(pi/2) = delta * I (x) shift`` when ``4 | h``, by nonempty-part case."""
    a1, a2, a3 = split_parts(spec)
    if not a1 and not a2 and not a3:
        raise HypothesisError("empty basis")
    if len(a1) == len(spec.basis) or len(a2) == len(spec.basis):
        raise HypothesisError("basis must have vectors active on both large and binary coordinates")
    large = spec.large_indices
    s1 = sum(hamming_weight(b) - 1 for b in a1)
    s3 = sum(hamming_weight(restrict(b, large)) - 1 for b in a3)
    ipow = i_pow(len(spec.basis))
    if a1 and a2 and a3:
        return sign(s1 + len(a2) + s3) * ipow
    if a1 and a2:
        return sign(s1 + len(a2)) * ipow
    if a1 and a3:
        return sign(s1 + s3) * ipow
    if a2 and a3:
        return sign(len(a2) + s3) * ipow
    return sign(s3) * ipow


def fiber_conditions(spec: NepsSpec, modulus: int) -> bool:
    """Every nonzero large pattern has a fiber of size divisible by ``modulus`` with zero XOR."""
    zero = (0,) * spec.d
    for x in project_star(spec):
        if x == zero:
            continue
        f = fiber(spec, x)
        if len(f) < 2 or len(f) % modulus or any(c_of(f)):
            return False
    return True


def _require_large(spec: NepsSpec) -> int:
    if spec.h is None:
        raise HypothesisError("no large factors, gcd undefined")
    return spec.h


def _half_pi_record(spec: NepsSpec) -> PhaseRecord:
    t = RationalAngle(1, 2)
    a1, a2, a3 = split_parts(spec)
    binary = spec.binary_indices
    if len(a2) == len(spec.basis):
        c = c_of(spec.basis)
        return PhaseRecord("binary-support", t, i_pow(-len(spec.basis)), c)
    h = _require_large(spec)
    if h % 4 == 0:
        c = c_of(spec.basis)
        tail = embed(spec, restrict(c, binary), binary)
        if len(a1) == len(spec.basis):
            s1 = sum(hamming_weight(b) - 1 for b in a1)
            return PhaseRecord("large-support-quarter", t, sign(s1) * i_pow(len(a1)), tail)
        return PhaseRecord("phase-table", t, delta_phase_table(spec), tail)
    if not a2 and not a3:
        raise HypothesisError("large-support basis with 4 not dividing h has no pi/2 closed form")
    modulus = 4 if h % 2 else 2
    if not fiber_conditions(spec, modulus):
        raise HypothesisError(f"fiber sizes must be = 0 mod {modulus} with zero XOR")
    ph = i_pow(-len(a2))
    if h % 2 == 0:
        zero = (0,) * spec.d
        for x in project_star(spec):
            if x != zero:
                ph *= sign(len(fiber(spec, x)) // 2)
    c0 = c_of((restrict(b, binary) for b in a2), spec.r)
    return PhaseRecord("idempotent-fibers", t, ph, embed(spec, c0, binary))


def closed_form_record(spec: NepsSpec, which: str) -> PhaseRecord:
    zero = (0,) * spec.m
    if which == "2pi/h":
        h = _require_large(spec)
        a1, _, _ = split_parts(spec)
        if len(a1) != len(spec.basis):
            raise HypothesisError("basis must vanish on every binary coordinate")
        s = sum(sign(hamming_weight(a) - 1) for a in spec.basis)
        t = RationalAngle(2, h)
        return PhaseRecord("scalar-gcd-period", t, phase(-s, t), zero)
    if which == "pi/2":
        return _half_pi_record(spec)
    if which == "pi":
        _, a2, _ = split_parts(spec)
        if len(a2) != len(spec.basis) and (spec.h is None or spec.h % 2):
            raise HypothesisError("pi closed form needs binary-only support or even h")
        return PhaseRecord("half-period", RationalAngle(1), sign(len(spec.basis)) + 0j, zero)
    if which == "2pi":
        return PhaseRecord("full-period", RationalAngle(2), 1 + 0j, zero)
    raise ValueError(f"unknown special time {which!r}; expected one of {SPECIAL_TIMES}")


def closed_form(spec: NepsSpec, which: str) -> tuple[np.ndarray, PhaseRecord]:
    rec = closed_form_record(spec, which)
    check_size(spec)
    return rec.phase * shift_matrix(spec, rec.shift), rec


def extract_phase(h: np.ndarray, spec: NepsSpec, shift: Sequence[int], tol: float = ANALYTIC_TOL) -> complex:
    """Scalar ``z`` with ``h == z * shift_matrix(shift)`` (raises if no such scalar)."""
    s = shift_matrix(spec, shift)
    cols = np.argmax(np.abs(s), axis=1)
    z = complex(h[0, cols[0]])
    dev = max_norm_diff(h, z * s)
    if dev > tol:
        raise HypothesisError(f"matrix is not a scalar multiple of the shift (deviation {dev:.3e})")
    return z
