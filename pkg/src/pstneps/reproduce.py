"""End-to-end reproduction runs for the bundled worked examples.

* ``complete-graphs``: ``K_n`` for ``n = 3..7`` is periodic at ``2*pi/n`` with
  ``H = exp(2*pi*i/n) I`` and never shows PST on the scan grid.
* ``k3-cube-pst-quarter``: ``NEPS(K_3, 5 x K_2)`` with ``c(A) = 0`` still has
  PST at ``pi/4``; ``H(t) = I_3 (x) H_cube(t)``.
* ``k4-cube-pst-quarter``: ``NEPS(K_4, 5 x K_2)`` has PST at ``pi/4`` and
  ``H(pi/4) = I_4 (x) H_cube(3*pi/4)``.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .analyzer import PST, detect_pst, predict_all
from .angle import RationalAngle, default_grid
from .linalg import ANALYTIC_TOL, max_norm_diff
from .neps import NepsSpec, c_of, restrict
from .spectral import factor_spectrum, lift_transition, tensor_transition, transition, SpectralDecomposition

QUARTER = RationalAngle(1, 4)
NO_PST_TOL = 1e-6


class TranscriptionError(ValueError):
    """A bundled basis table does not match its checksum or stated values."""


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float | int | str


@dataclass
class ExampleResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, value) -> None:
        self.checks.append(Check(name, bool(passed), value))


def _canonical(factors, basis) -> str:
    return json.dumps({"factors": factors, "basis": basis}, sort_keys=True, separators=(",", ":"))


def bundled_documents() -> dict:
    text = resources.files("pstneps").joinpath("data/bundled_examples.json").read_text()
    return json.loads(text)


def load_bundled(name: str) -> NepsSpec:
    """Load a bundled spec after checking its checksum and stated values."""
    docs = bundled_documents()
    if name not in docs:
        raise KeyError(f"no bundled example {name!r}; have {sorted(docs)}")
    doc = docs[name]
    digest = hashlib.sha256(_canonical(doc["factors"], doc["basis"]).encode()).hexdigest()
    if digest != doc["sha256"]:
        raise TranscriptionError(f"{name}: checksum mismatch")
    spec = NepsSpec(doc["factors"], doc["basis"], name=name)
    stated = doc["stated"]
    if len(spec.basis) != stated["size"]:
        raise TranscriptionError(f"{name}: |A| = {len(spec.basis)}, expected {stated['size']}")
    if "c_full" in stated and list(c_of(spec.basis)) != stated["c_full"]:
        raise TranscriptionError(f"{name}: c(A) = {c_of(spec.basis)}, expected {stated['c_full']}")
    if "c_binary" in stated:
        parts = [restrict(a, spec.binary_indices) for a in spec.basis]
        if list(c_of(parts)) != stated["c_binary"]:
            raise TranscriptionError(f"{name}: binary parts do not XOR to {stated['c_binary']}")
    return spec


def cube_part(spec: NepsSpec) -> NepsSpec:
    """Cubelike spec on the binary coordinates, basis = distinct binary parts."""
    parts = dict.fromkeys(restrict(a, spec.binary_indices) for a in spec.basis)
    return NepsSpec((2,) * spec.r, tuple(parts))


def _max_offdiag(h: np.ndarray) -> float:
    mod = np.abs(h)
    np.fill_diagonal(mod, 0.0)
    return float(mod.max())


def complete_graphs(ns=range(3, 8), tol: float = ANALYTIC_TOL) -> ExampleResult:
    res = ExampleResult("complete-graphs")
    grid = default_grid()
    for n in ns:
        spec = NepsSpec((n,), [(1,)])
        t = RationalAngle(2, n)
        dev = max_norm_diff(transition(spec, t), cmath.exp(2j * math.pi / n) * np.eye(n))
        res.add(f"K{n}: H(2pi/{n}) = exp(2pi i/{n}) I", dev <= tol, dev)
        worst = max(_max_offdiag(transition(spec, s)) for s in grid)
        res.add(f"K{n}: no PST on grid", worst <= 1 - NO_PST_TOL, worst)
    return res


def _quarter_checks(res: ExampleResult, spec: NepsSpec, tol: float) -> np.ndarray:
    h = transition(spec, QUARTER)
    events = detect_pst(h, spec, QUARTER, tol)
    sources = {e.source for e in events}
    res.add("PST at pi/4 from every vertex", len(sources) == spec.n_vertices, len(events))
    worst = min((e.modulus for e in events), default=0.0)
    res.add("PST modulus = 1", abs(1 - worst) <= tol, worst)
    preds, _ = predict_all(spec)
    fired = [p for p in preds if p.kind == PST and p.time == QUARTER]
    res.add("no sufficient condition predicts PST at pi/4", not fired, len(fired))
    return h


def k3_cube(tol: float = ANALYTIC_TOL) -> ExampleResult:
    res = ExampleResult("k3-cube-pst-quarter")
    spec = load_bundled(res.name)
    res.add("transcription: |A| = 11, c(A) = 0", True, len(spec.basis))
    h = _quarter_checks(res, spec, tol)
    cube = cube_part(spec)
    dev = max_norm_diff(h, lift_transition(transition(cube, QUARTER), spec.factors[0], 1))
    res.add("H(pi/4) = I_3 (x) H_cube(pi/4)", dev <= tol, dev)
    return res


def k4_cube(tol: float = ANALYTIC_TOL) -> ExampleResult:
    res = ExampleResult("k4-cube-pst-quarter")
    spec = load_bundled(res.name)
    res.add("transcription: |A| = 20, binary parts XOR to 0", True, len(spec.basis))
    h = _quarter_checks(res, spec, tol)
    cube = cube_part(spec)
    identity_form = lift_transition(transition(cube, RationalAngle(3, 4)), 4, 1)
    dev = max_norm_diff(h, identity_form)
    res.add("H(pi/4) = I_4 (x) H_cube(3pi/4)", dev <= tol, dev)
    fs = factor_spectrum(4)
    k4 = SpectralDecomposition(tuple(zip(fs.eigenvalues, fs.projectors)))
    via_tensor = tensor_transition(k4, lambda s: transition(cube, s), QUARTER)
    dev2 = max_norm_diff(via_tensor, identity_form)
    res.add("tensor route = I_4 (x) H_cube(3pi/4)", dev2 <= tol, dev2)
    return res


def run_all(tol: float = ANALYTIC_TOL) -> list[ExampleResult]:
    return [complete_graphs(tol=tol), k3_cube(tol), k4_cube(tol)]
