"""Precision configuration and a sign/log-magnitude value carrier.

All overflow-prone quantities (gamma ratios, Bessel weights, normalization
constants) travel as LogValue so that degrees up to a few hundred never
leave the representable range.  Extended mode backs evaluations with mpmath
at a configurable mantissa width.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import mp


@dataclass(frozen=True)
class PrecisionConfig:
    mode: str = "double"          # "double" | "extended"
    mantissa_bits: int = 256      # used in extended mode only
    sum_compensation: bool = True

    def __post_init__(self):
        if self.mode not in ("double", "extended"):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if self.mode == "extended" and self.mantissa_bits < 64:
            raise ValueError("extended mode requires mantissa_bits >= 64")

    @property
    def extended(self) -> bool:
        return self.mode == "extended"


DOUBLE = PrecisionConfig()
EXTENDED = PrecisionConfig(mode="extended")


def from_env(default: PrecisionConfig = DOUBLE) -> PrecisionConfig:
    """Read BMOP_PRECISION: 'double' or 'extended:<bits>'."""
    raw = os.environ.get("BMOP_PRECISION")
    if not raw:
        return default
    raw = raw.strip()
    if raw == "double":
        return DOUBLE
    if raw == "extended":
        return EXTENDED
    if raw.startswith("extended:"):
        return PrecisionConfig(mode="extended", mantissa_bits=int(raw.split(":", 1)[1]))
    raise ValueError(f"bad BMOP_PRECISION value {raw!r}")


@contextmanager
def workprec(bits: int):
    """mpmath precision context (bits of mantissa)."""
    with mp.workprec(bits):
        yield mp


@dataclass(frozen=True)
class LogValue:
    """A real number stored as sign * exp(log_magnitude).

    sign == 0 encodes an exact zero (log_magnitude is then ignored).
    """

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0.0, 0)

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @classmethod
    def from_mpf(cls, x) -> "LogValue":
        if x == 0:
            return cls.zero()
        return cls(float(mpmath.log(abs(x))), 1 if x > 0 else -1)

    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def mpf(self, bits: int = 113):
        if self.sign == 0:
            return mp.mpf(0)
        with mp.workprec(bits):
            return self.sign * mpmath.exp(mp.mpf(self.log_magnitude))

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def scaled(self, factor: float) -> "LogValue":
        """Multiply by a plain float."""
        return self * LogValue.from_float(factor)

    def powi(self, k: int) -> "LogValue":
        if self.sign == 0:
            return LogValue.zero() if k > 0 else LogValue(0.0, 1)
        return LogValue(k * self.log_magnitude, self.sign if k % 2 else 1)


def logsum(terms) -> float:
    """Sum of LogValue terms as a float, scaled to dodge overflow.

    Accurate to double rounding relative to the largest term; callers are
    responsible for detecting cancellation (compare against max term).
    """
    terms = [t for t in terms if t.sign != 0]
    if not terms:
        return 0.0
    m = max(t.log_magnitude for t in terms)
    s = math.fsum(t.sign * math.exp(t.log_magnitude - m) for t in terms)
    return s * math.exp(m)
