"""Continuous-time quantum walks on NEPS of complete graphs.

Build NEPS graphs over complete-graph factors, compute ``exp(-i t A)``
analytically, detect perfect state transfer and periodicity, and check
structural sufficient conditions against the numbers.
"""

__version__ = "0.1.0"

from .angle import RationalAngle, default_grid
from .neps import NepsSpec, SizeCapError, SpecError, neps_adjacency, validate_spec
from .spectral import closed_form, transition
from .analyzer import analyze, detect_periodic, detect_pst
from .oracle import OracleConfig, certify, expm_series

__all__ = [
    "NepsSpec",
    "OracleConfig",
    "RationalAngle",
    "SizeCapError",
    "SpecError",
    "analyze",
    "certify",
    "closed_form",
    "default_grid",
    "detect_periodic",
    "detect_pst",
    "expm_series",
    "neps_adjacency",
    "transition",
    "validate_spec",
]
