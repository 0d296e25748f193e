"""PST / periodicity detection and structural predictions.

Predictors look only at the factor sizes and basis; they never touch a
matrix.  :func:`analyze` runs all of them, evaluates the transition matrix at
every predicted time plus a scan grid, and checks each prediction against
the numbers.  A predictor whose hypothesis fails makes no claim; it never
asserts the absence of PST.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .angle import RationalAngle, default_grid
from .linalg import ANALYTIC_TOL, is_unitary
from .neps import (
    Bits,
    NepsSpec,
    embed,
    index_vertex,
    is_standard_basis,
    split_parts,
    vertex_coords,
    vertex_sub,
)
from .spectral import closed_form_record, fiber_conditions, i_pow, sign, transition

PST = "PST"
PERIODIC = "Periodic"

RULES = ("large-support", "binary-support", "mixed-support", "hamming", "cubelike")


class EngineError(RuntimeError):
    """An analytic transition matrix failed a sanity check."""


@dataclass(frozen=True)
class PstEvent:
    source: tuple[int, ...]
    target: tuple[int, ...]
    time: RationalAngle | float
    modulus: float
    phase: complex


@dataclass(frozen=True)
class Periodicity:
    """All diagonal entries have unit modulus.

    ``scalar`` is true when they also share one phase (``H = phase * I``);
    otherwise ``phase`` is ``None`` and only ``vertex_phases`` are meaningful.
    """

    scalar: bool
    phase: complex | None
    vertex_phases: tuple[complex, ...]


@dataclass(frozen=True)
class Prediction:
    kind: str
    time: RationalAngle
    rule: str
    shift: Bits | None = None
    phase: complex | None = None

    def __post_init__(self):
        if self.kind == PST and (self.shift is None or not any(self.shift)):
            raise ValueError("PST prediction needs a nonzero shift")

    @property
    def period(self) -> RationalAngle | None:
        return self.time if self.kind == PERIODIC else None


@dataclass(frozen=True)
class Verification:
    prediction: Prediction
    confirmed: bool
    deviation: float
    detail: str = ""


@dataclass
class AnalysisReport:
    spec: NepsSpec
    tol: float
    times: list
    events: list[PstEvent] = field(default_factory=list)
    periodic_at: list[tuple[object, Periodicity]] = field(default_factory=list)
    predictions: list[Prediction] = field(default_factory=list)
    verification: list[Verification] = field(default_factory=list)
    no_claim: list[str] = field(default_factory=list)
    beyond: list[dict] = field(default_factory=list)

    @property
    def discrepancies(self) -> list[Verification]:
        return [v for v in self.verification if not v.confirmed]

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def events_at(self, t) -> list[PstEvent]:
        return [e for e in self.events if e.time == t]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "tol": self.tol,
            "times": [_time(t) for t in self.times],
            "predictions": [_prediction(p) for p in self.predictions],
            "verification": [
                {
                    "prediction": _prediction(v.prediction),
                    "confirmed": v.confirmed,
                    "deviation": v.deviation,
                    "detail": v.detail,
                }
                for v in self.verification
            ],
            "no_claim": list(self.no_claim),
            "events": [
                {
                    "time": _time(e.time),
                    "source": list(e.source),
                    "target": list(e.target),
                    "modulus": e.modulus,
                    "phase": _cx(e.phase),
                }
                for e in self.events
            ],
            "periodic_at": [
                {
                    "time": _time(t),
                    "scalar": p.scalar,
                    "phase": None if p.phase is None else _cx(p.phase),
                }
                for t, p in self.periodic_at
            ],
            "pst_beyond_sufficient_conditions": [
                {"time": _time(b["time"]), "shifts": [list(s) for s in b["shifts"]]} for b in self.beyond
            ],
            "ok": self.ok,
        }


def _cx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _time(t) -> str | float:
    return str(t) if isinstance(t, RationalAngle) else float(t)


def _prediction(p: Prediction) -> dict:
    return {
        "kind": p.kind,
        "time": _time(p.time),
        "rule": p.rule,
        "shift": None if p.shift is None else list(p.shift),
        "phase": None if p.phase is None else _cx(p.phase),
    }


# detection -------------------------------------------------------------------

def detect_pst(h: np.ndarray, spec: NepsSpec, time, tol: float = ANALYTIC_TOL) -> list[PstEvent]:
    if not is_unitary(h, max(tol, ANALYTIC_TOL)):
        raise EngineError("detect_pst needs a unitary matrix")
    mod = np.abs(h)
    np.fill_diagonal(mod, 0.0)
    rows, cols = np.nonzero(mod >= 1.0 - tol)
    return [
        PstEvent(index_vertex(spec, int(u)), index_vertex(spec, int(v)), time,
                 float(mod[u, v]), complex(h[u, v]))
        for u, v in zip(rows, cols)
    ]


def detect_periodic(h: np.ndarray, tol: float = ANALYTIC_TOL) -> Periodicity | None:
    diag = np.diag(h)
    if np.any(np.abs(diag) < 1.0 - tol):
        return None
    scalar = bool(np.max(np.abs(diag - diag[0])) <= tol)
    return Periodicity(scalar, complex(diag[0]) if scalar else None, tuple(complex(z) for z in diag))


# predictors ------------------------------------------------------------------

def _half_pi(spec: NepsSpec, rule: str) -> Prediction:
    rec = closed_form_record(spec, "pi/2")
    if any(rec.shift):
        return Prediction(PST, rec.time, rule, rec.shift, rec.phase)
    return Prediction(PERIODIC, rec.time, rule, None, rec.phase)


def predict_large_support(spec: NepsSpec) -> Prediction | None:
    """Basis vanishing on every binary coordinate: periodic at ``2*pi/h``."""
    a1, _, _ = split_parts(spec)
    if spec.d == 0 or len(a1) != len(spec.basis):
        return None
    rec = closed_form_record(spec, "2pi/h")
    return Prediction(PERIODIC, rec.time, "large-support", None, rec.phase)


def predict_binary_support(spec: NepsSpec) -> Prediction | None:
    """Basis vanishing on every large coordinate (with at least one large factor).

    PST at ``pi/2`` to ``u + c(A)`` when ``c(A) != 0``, otherwise periodic
    there; the phase is ``(-i)^|A|`` in both cases.
    """
    _, a2, _ = split_parts(spec)
    if spec.d == 0 or len(a2) != len(spec.basis):
        return None
    return _half_pi(spec, "binary-support")


def predict_mixed_support(spec: NepsSpec) -> list[Prediction]:
    """Bases with vectors active on both large and binary coordinates."""
    if spec.d == 0 or spec.r == 0:
        return []
    a1, a2, _ = split_parts(spec)
    if len(a1) == len(spec.basis) or len(a2) == len(spec.basis):
        return []
    h = spec.h
    out = []
    if h % 2:
        out.append(Prediction(PERIODIC, RationalAngle(2), "mixed-support", None, 1 + 0j))
        if fiber_conditions(spec, 4):
            out.append(_half_pi(spec, "mixed-support/fibers-mod-4"))
    else:
        out.append(Prediction(PERIODIC, RationalAngle(1), "mixed-support", None, sign(len(spec.basis)) + 0j))
        if h % 4 == 2 and fiber_conditions(spec, 2):
            out.append(_half_pi(spec, "mixed-support/fibers-mod-2"))
        if h % 4 == 0:
            out.append(_half_pi(spec, "mixed-support/h-div-4"))
    return out


def predict_hamming(spec: NepsSpec) -> list[Prediction]:
    """Standard basis with both large and binary factors (a Hamming graph)."""
    if not is_standard_basis(spec) or spec.d == 0 or spec.r == 0:
        return []
    h = spec.h
    d, r = spec.d, spec.r
    if h % 2:
        return [Prediction(PERIODIC, RationalAngle(2), "hamming", None, 1 + 0j)]
    out = [Prediction(PERIODIC, RationalAngle(1), "hamming", None, sign(d + r) + 0j)]
    if h % 4 == 0:
        ones = embed(spec, (1,) * r, spec.binary_indices)
        # large unit vectors have weight 1; binary unit vectors each contribute -i
        out.append(Prediction(PST, RationalAngle(1, 2), "hamming", ones, i_pow(d) * i_pow(-r)))
    return out


def predict_cubelike(spec: NepsSpec) -> Prediction | None:
    if spec.d != 0:
        return None
    return _half_pi(spec, "cubelike")


def predict_all(spec: NepsSpec) -> tuple[list[Prediction], list[str]]:
    """All fired predictions plus the names of rules that made no claim."""
    fired: list[Prediction] = []
    no_claim: list[str] = []
    results = {
        "large-support": predict_large_support(spec),
        "binary-support": predict_binary_support(spec),
        "mixed-support": predict_mixed_support(spec),
        "hamming": predict_hamming(spec),
        "cubelike": predict_cubelike(spec),
    }
    for rule, res in results.items():
        preds = [] if res is None else res if isinstance(res, list) else [res]
        if preds:
            fired.extend(preds)
        else:
            no_claim.append(rule)
    return fired, no_claim


# verification ----------------------------------------------------------------

def _pairs(spec: NepsSpec, shift: Bits) -> tuple[np.ndarray, np.ndarray]:
    coords = vertex_coords(spec)
    moved = (coords + np.array(shift)) % np.array(spec.factors)
    flat = np.ravel_multi_index(moved.T, spec.factors)
    return np.arange(spec.n_vertices), flat


def verify_prediction(pred: Prediction, h: np.ndarray, spec: NepsSpec, tol: float = ANALYTIC_TOL) -> Verification:
    if pred.kind == PST:
        rows, cols = _pairs(spec, pred.shift)
        entries = h[rows, cols]
        worst = float(np.max(1.0 - np.abs(entries)))
        if worst > tol:
            return Verification(pred, False, worst, "transfer entry modulus below 1 - tol")
        if pred.phase is not None:
            dev = float(np.max(np.abs(entries - pred.phase)))
            if dev > tol:
                return Verification(pred, False, dev, "phase mismatch")
            return Verification(pred, True, max(worst, dev))
        return Verification(pred, True, worst)

    per = detect_periodic(h, tol)
    if per is None:
        worst = float(np.max(1.0 - np.abs(np.diag(h))))
        return Verification(pred, False, worst, "not periodic at predicted time")
    if pred.phase is not None:
        dev = float(np.max(np.abs(np.diag(h) - pred.phase)))
        if not per.scalar or dev > tol:
            return Verification(pred, False, dev, "phase mismatch")
        return Verification(pred, True, dev)
    return Verification(pred, True, 0.0)


def analyze(spec: NepsSpec, times: Iterable | None = None, tol: float = ANALYTIC_TOL,
            verify_paths: bool = False) -> AnalysisReport:
    scan = list(default_grid() if times is None else times)
    predictions, no_claim = predict_all(spec)
    all_times = list(dict.fromkeys(scan + [p.time for p in predictions]))
    report = AnalysisReport(spec, tol, all_times, predictions=predictions, no_claim=no_claim)

    matrices = {}
    for t in all_times:
        h = transition(spec, t, verify_paths=verify_paths)
        if not is_unitary(h, max(tol, ANALYTIC_TOL)):
            raise EngineError(f"transition matrix at t={t} is not unitary")
        matrices[t] = h
        report.events.extend(detect_pst(h, spec, t, tol))
        per = detect_periodic(h, tol)
        if per is not None:
            report.periodic_at.append((t, per))

    for p in predictions:
        report.verification.append(verify_prediction(p, matrices[p.time], spec, tol))

    for t in all_times:
        shifts = sorted({vertex_sub(spec, e.target, e.source) for e in report.events_at(t)})
        if not shifts:
            continue
        explained = {
            v.prediction.shift for v in report.verification
            if v.confirmed and v.prediction.kind == PST and v.prediction.time == t
        }
        if set(shifts) - explained:
            report.beyond.append({"time": t, "shifts": shifts})
    return report
