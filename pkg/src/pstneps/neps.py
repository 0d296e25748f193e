"""NEPS specifications over complete-graph factors.

A spec is a tuple of factor sizes ``(n_1, ..., n_m)`` together with a basis
of nonzero 0/1 activation patterns of length ``m``.  Vertices are elements of
``Z_{n_1} x ... x Z_{n_m}``, indexed mixed-radix with coordinate 0 most
significant (the same order the Kronecker construction uses).

Coordinates with ``n_i >= 3`` are called *large*, coordinates with ``n_i == 2``
*binary*.  Factor order is arbitrary; everything downstream works on the two
index sets rather than assuming large factors come first.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .linalg import DTYPE, complete_graph_adjacency, identity, kron_all

DEFAULT_SIZE_CAP = 4096
SIZE_CAP_ENV = "PSTNEPS_SIZE_CAP"

Bits = tuple[int, ...]


class SpecError(ValueError):
    """Invalid NEPS specification."""


class SizeCapError(RuntimeError):
    """Vertex count exceeds the configured dense-matrix budget."""


def size_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SpecError(f"{SIZE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise SpecError(f"{SIZE_CAP_ENV} must be positive")
    return cap


def _as_bits(row, m: int, where: str) -> Bits:
    if isinstance(row, (str, bytes)) or not isinstance(row, Sequence):
        raise SpecError(f"{where}: expected a list of 0/1 entries, got {row!r}")
    bits = []
    for x in row:
        if isinstance(x, bool) or x not in (0, 1):
            raise SpecError(f"{where}: entries must be 0 or 1, got {x!r}")
        bits.append(int(x))
    if len(bits) != m:
        raise SpecError(f"{where}: length {len(bits)} does not match factor count {m}")
    return tuple(bits)


@dataclass(frozen=True)
class NepsSpec:
    factors: tuple[int, ...]
    basis: tuple[Bits, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        factors = self.factors
        if isinstance(factors, (str, bytes)) or not isinstance(factors, Sequence):
            raise SpecError("factors must be a list of integers")
        if len(factors) < 1:
            raise SpecError("at least one factor is required")
        for i, n in enumerate(factors):
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
                raise SpecError(f"factor {i}: expected an integer, got {n!r}")
            if n < 2:
                raise SpecError(f"factor {i}: size {n} < 2")
        factors = tuple(int(n) for n in factors)
        m = len(factors)

        if isinstance(self.basis, (str, bytes)) or not isinstance(self.basis, (Sequence, set, frozenset)):
            raise SpecError("basis must be a list of bit vectors")
        basis = [_as_bits(row, m, f"basis row {k}") for k, row in enumerate(self.basis)]
        if not basis:
            raise SpecError("basis is empty")
        seen: dict[Bits, int] = {}
        for k, a in enumerate(basis):
            if not any(a):
                raise SpecError(f"basis row {k}: zero vector is not allowed")
            if a in seen:
                raise SpecError(f"basis row {k}: duplicate of row {seen[a]}")
            seen[a] = k
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "basis", tuple(basis))

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def n_vertices(self) -> int:
        return math.prod(self.factors)

    @property
    def large_indices(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.factors) if n >= 3)

    @property
    def binary_indices(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.factors) if n == 2)

    @property
    def d(self) -> int:
        return len(self.large_indices)

    @property
    def r(self) -> int:
        return len(self.binary_indices)

    @property
    def h(self) -> int | None:
        """gcd of the large factor sizes, ``None`` when there are none."""
        large = [self.factors[i] for i in self.large_indices]
        return reduce(math.gcd, large) if large else None

    def with_basis(self, basis: Iterable[Bits]) -> "NepsSpec":
        return NepsSpec(self.factors, tuple(basis))

    def to_dict(self) -> dict:
        doc = {"factors": list(self.factors), "basis": [list(a) for a in self.basis]}
        if self.name is not None:
            doc["name"] = self.name
        return doc

    def __str__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"{label}NEPS{self.factors} |A|={len(self.basis)}"


def validate_spec(raw) -> NepsSpec:
    """Build a spec from a mapping ``{"factors": [...], "basis": [[...], ...]}``."""
    if isinstance(raw, NepsSpec):
        return raw
    if not isinstance(raw, dict):
        raise SpecError("spec document must be a JSON object")
    unknown = set(raw) - {"factors", "basis", "name"}
    if unknown:
        raise SpecError(f"unknown keys in spec document: {sorted(unknown)}")
    for key in ("factors", "basis"):
        if key not in raw:
            raise SpecError(f"spec document is missing {key!r}")
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecError("name must be a string")
    return NepsSpec(raw["factors"], raw["basis"], name=name)


def check_size(spec: NepsSpec, cap: int | None = None) -> int:
    cap = size_cap() if cap is None else cap
    n = spec.n_vertices
    if n > cap:
        raise SizeCapError(f"{n} vertices exceeds the size cap of {cap}")
    return n


# vertices ------------------------------------------------------------------

def vertex_index(spec: NepsSpec, v: Sequence[int]) -> int:
    if len(v) != spec.m:
        raise SpecError(f"vertex length {len(v)} does not match factor count {spec.m}")
    k = 0
    for u, n in zip(v, spec.factors):
        if not 0 <= u < n:
            raise SpecError(f"vertex {tuple(v)} out of range for factors {spec.factors}")
        k = k * n + int(u)
    return k


def index_vertex(spec: NepsSpec, k: int) -> tuple[int, ...]:
    if not 0 <= k < spec.n_vertices:
        raise SpecError(f"index {k} out of range [0, {spec.n_vertices})")
    coords = []
    for n in reversed(spec.factors):
        k, u = divmod(k, n)
        coords.append(u)
    return tuple(reversed(coords))


def vertex_coords(spec: NepsSpec) -> np.ndarray:
    """``(N, m)`` integer array; row ``k`` is ``index_vertex(spec, k)``."""
    grids = np.indices(spec.factors).reshape(spec.m, -1)
    return grids.T.copy()


def vertex_add(spec: NepsSpec, u: Sequence[int], a: Sequence[int]) -> tuple[int, ...]:
    if len(u) != spec.m or len(a) != spec.m:
        raise SpecError("vertex and shift lengths must match the factor count")
    return tuple((ui + ai) % n for ui, ai, n in zip(u, a, spec.factors))


def vertex_sub(spec: NepsSpec, v: Sequence[int], u: Sequence[int]) -> tuple[int, ...]:
    return tuple((vi - ui) % n for vi, ui, n in zip(v, u, spec.factors))


# basis combinatorics --------------------------------------------------------

def xor(a: Sequence[int], b: Sequence[int]) -> Bits:
    if len(a) != len(b):
        raise SpecError("length mismatch")
    return tuple((x + y) % 2 for x, y in zip(a, b))


def c_of(vectors: Iterable[Sequence[int]], m: int | None = None) -> Bits:
    """Mod-2 sum of ``vectors``.  ``m`` is needed only for an empty input."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        if m is None:
            raise ValueError("c_of of an empty set needs the vector length")
        return (0,) * m
    return reduce(xor, vectors)


def hamming_weight(a: Sequence[int]) -> int:
    return sum(1 for x in a if x)


def restrict(a: Sequence[int], indices: Sequence[int]) -> Bits:
    return tuple(a[i] for i in indices)


def embed(spec: NepsSpec, part: Sequence[int], indices: Sequence[int]) -> Bits:
    """Full-length vector with ``part`` placed on ``indices`` and zeros elsewhere."""
    out = [0] * spec.m
    for i, x in zip(indices, part):
        out[i] = x
    return tuple(out)


def project_star(spec: NepsSpec, vectors: Iterable[Bits] | None = None) -> frozenset[Bits]:
    """Large-coordinate parts of the basis vectors."""
    vectors = spec.basis if vectors is None else vectors
    return frozenset(restrict(a, spec.large_indices) for a in vectors)


def fiber(spec: NepsSpec, x: Sequence[int]) -> frozenset[Bits]:
    """Binary-coordinate parts of basis vectors whose large part equals ``x``."""
    x = tuple(x)
    if len(x) != spec.d:
        raise SpecError(f"large part must have length {spec.d}")
    return frozenset(
        restrict(a, spec.binary_indices)
        for a in spec.basis
        if restrict(a, spec.large_indices) == x
    )


def split_parts(spec: NepsSpec) -> tuple[tuple[Bits, ...], tuple[Bits, ...], tuple[Bits, ...]]:
    """Partition the basis into (large-only, binary-only, mixed) vectors."""
    large_only, binary_only, mixed = [], [], []
    for a in spec.basis:
        on_large = any(restrict(a, spec.large_indices))
        on_binary = any(restrict(a, spec.binary_indices))
        if not on_binary:
            large_only.append(a)
        elif not on_large:
            binary_only.append(a)
        else:
            mixed.append(a)
    return tuple(large_only), tuple(binary_only), tuple(mixed)


def standard_basis(m: int) -> tuple[Bits, ...]:
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def is_standard_basis(spec: NepsSpec) -> bool:
    return set(spec.basis) == set(standard_basis(spec.m))


def degree(spec: NepsSpec) -> int:
    return sum(math.prod((n - 1) ** ai for n, ai in zip(spec.factors, a)) for a in spec.basis)


# adjacency -------------------------------------------------------------------

def adjacency_from_definition(spec: NepsSpec) -> np.ndarray:
    """Edge test straight from the NEPS definition, vectorised over vertex pairs."""
    coords = vertex_coords(spec)
    same = [coords[:, i][:, None] == coords[:, i][None, :] for i in range(spec.m)]
    adj = np.zeros((spec.n_vertices,) * 2, dtype=bool)
    for a in spec.basis:
        edge = np.ones_like(adj)
        for i, ai in enumerate(a):
            edge &= ~same[i] if ai else same[i]
        adj |= edge
    return adj.astype(DTYPE)


def adjacency_from_kron(spec: NepsSpec) -> np.ndarray:
    """Sum over the basis of Kronecker products of factor adjacencies / identities."""
    total = np.zeros((spec.n_vertices,) * 2, dtype=DTYPE)
    for a in spec.basis:
        total += single_adjacency(spec, a)
    return total


def single_adjacency(spec: NepsSpec, a: Sequence[int]) -> np.ndarray:
    return kron_all(
        complete_graph_adjacency(n) if ai else identity(n) for n, ai in zip(spec.factors, a)
    )


def neps_adjacency(spec: NepsSpec, method: str = "definition", cap: int | None = None) -> np.ndarray:
    check_size(spec, cap)
    if method == "definition":
        return adjacency_from_definition(spec)
    if method == "kron":
        return adjacency_from_kron(spec)
    raise ValueError(f"unknown adjacency method {method!r}")


def shift_matrix(spec: NepsSpec, shift: Sequence[int]) -> np.ndarray:
    """Permutation matrix with ones at ``(u, u + shift)``; shift must be 0/1 on binary coordinates only."""
    shift = tuple(shift)
    for i, s in enumerate(shift):
        if s and spec.factors[i] != 2:
            raise SpecError("shift must be supported on binary coordinates")
    return kron_all(
        complete_graph_adjacency(2) if s else identity(n) for n, s in zip(spec.factors, shift)
    )
