"""Complex numbers stored as (log-modulus, phase).

Values such as C(8000, 50) ~ 1e130 and their reciprocals quickly leave the
range of an ordinary double once they are multiplied together, so the
interference evaluators carry magnitudes as natural logarithms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_LOG_MAX_FLOAT = math.log(np.finfo(float).max)


def canonical_phase(phase):
    """Map an angle (scalar or array) into (-pi, pi]."""
    phase = np.asarray(phase, dtype=float)
    wrapped = np.remainder(phase + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, np.pi, wrapped)
    wrapped = np.where((phase > -np.pi) & (phase <= np.pi), phase, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class LogComplex:
    """A complex value ``exp(log_mag) * exp(1j * phase)``.

    ``log_mag = -inf`` encodes an exact zero, in which case the phase is 0.
    """

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        log_mag = float(self.log_mag)
        if math.isnan(log_mag) or log_mag == math.inf:
            raise DomainError(f"log_mag must be finite or -inf, got {self.log_mag}")
        phase = 0.0 if log_mag == -math.inf else canonical_phase(self.phase)
        object.__setattr__(self, "log_mag", log_mag)
        object.__setattr__(self, "phase", phase)

    @classmethod
    def zero(cls) -> LogComplex:
        return cls(-math.inf, 0.0)

    @classmethod
    def from_complex(cls, value: complex) -> LogComplex:
        value = complex(value)
        if value == 0:
            return cls.zero()
        return cls(math.log(abs(value)), cmath.phase(value))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    def to_complex(self) -> complex:
        """Convert back to an ordinary complex; raises OverflowError if too large."""
        if self.is_zero:
            return 0j
        if self.log_mag > _LOG_MAX_FLOAT:
            raise OverflowError(f"|value| = exp({self.log_mag:.6g}) overflows a double")
        return cmath.rect(math.exp(self.log_mag), self.phase)

    def __complex__(self):
        return self.to_complex()

    def __abs__(self):
        return math.exp(self.log_mag)

    def __mul__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by an exact zero LogComplex")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def conjugate(self) -> LogComplex:
        return LogComplex(self.log_mag, -self.phase)


def log_binomial(N: int, n: int) -> float:
    """Natural log of the binomial coefficient C(N, n).

    For min(n, N - n) up to a million the value is an exactly rounded sum of
    ``log1p((N - k)/i)`` terms, which keeps relative accuracy even when
    ``ln C`` is small compared to ``ln N!``. Beyond that the log-gamma
    difference is used.
    """
    N, n = int(N), int(n)
    if N < 0 or n < 0:
        raise DomainError(f"N and n must be non-negative, got N={N}, n={n}")
    if n > N:
        raise DomainError(f"n={n} exceeds N={N}")
    k = min(n, N - n)
    if k == 0:
        return 0.0
    if k <= 1_000_000:
        i = np.arange(1, k + 1, dtype=float)
        return math.fsum(np.log1p((N - k) / i))
    return math.lgamma(N + 1) - math.lgamma(n + 1) - math.lgamma(N - n + 1)
