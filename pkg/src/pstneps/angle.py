"""Times expressed as exact rational multiples of pi."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True, order=True, init=False)
class RationalAngle:
    """The time ``p * pi / q``, stored reduced with ``q > 0``."""

    coeff: Fraction

    def __init__(self, p: int | Fraction = 0, q: int = 1):
        if q == 0:
            raise ZeroDivisionError("denominator must be nonzero")
        object.__setattr__(self, "coeff", Fraction(p) / q)

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        """Parse ``"p/q"`` or ``"p"`` (both meaning ``p*pi/q``)."""
        text = text.strip()
        try:
            if "/" in text:
                p, q = text.split("/")
                frac = Fraction(int(p), int(q))
            else:
                frac = Fraction(int(text))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"time must be a fraction p/q meaning p*pi/q, got {text!r}") from None
        return cls(frac)

    @property
    def p(self) -> int:
        return self.coeff.numerator

    @property
    def q(self) -> int:
        return self.coeff.denominator

    @property
    def radians(self) -> float:
        return math.pi * self.p / self.q

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.coeff + other.coeff)

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.coeff)

    def __mul__(self, k: int | Fraction) -> "RationalAngle":
        return RationalAngle(self.coeff * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def pretty(self) -> str:
        if self.p == 0:
            return "0"
        num = "π" if abs(self.p) == 1 else f"{abs(self.p)}π"
        sign = "-" if self.p < 0 else ""
        return sign + (num if self.q == 1 else f"{num}/{self.q}")


Time = Union[RationalAngle, float, int]


def radians(t: Time) -> float:
    return t.radians if isinstance(t, RationalAngle) else float(t)


def scale_time(t: Time, k: int) -> Time:
    return t * k if isinstance(t, RationalAngle) else float(t) * k


def phase(eigenvalue: int, t: Time) -> complex:
    """``exp(-i * t * eigenvalue)``.

    For rational angles the exponent is reduced modulo ``2*pi`` exactly
    before going to floating point, so large eigenvalues cost no accuracy.
    """
    if isinstance(t, RationalAngle):
        c = (t.coeff * eigenvalue) % 2
        return _unit_phase(c)
    return cmath.exp(-1j * float(t) * eigenvalue)


_EXACT = {
    Fraction(0): 1 + 0j,
    Fraction(1, 2): -1j,
    Fraction(1): -1 + 0j,
    Fraction(3, 2): 1j,
}


def _unit_phase(c: Fraction) -> complex:
    # exp(-i*pi*c) for c in [0, 2)
    if c in _EXACT:
        return _EXACT[c]
    return cmath.exp(-1j * math.pi * float(c))


def default_grid(max_q: int = 8, upper: int = 2) -> list[RationalAngle]:
    """All reduced ``p*pi/q`` with ``1 <= q <= max_q`` and ``0 < p/q <= upper``."""
    coeffs = {Fraction(p, q) for q in range(1, max_q + 1) for p in range(1, upper * q + 1)}
    return [RationalAngle(c) for c in sorted(coeffs)]
