"""Validity window of the bievolution approximation in physical units.

The commutator eigenvalue density is modelled only by its width
lambda_SD = sqrt(f) * 1e57 s^-2, f being the fraction of T-violating particles.
Mixed-direction paths are suppressed while the first subsidiary maximum of the
interference function, z = 3*pi/(N+1), lies far outside the spread
tau**2 * lambda_SD.  That turns into an upper bound on the total time N*tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from .constants import (
    LAMBDA_SD_SCALE,
    LESS_STRINGENT_LOWER_BOUND,
    MUCH_LESS,
    PLANCK_TIME,
    STRINGENT_CONSTANT,
)
from .errors import DomainError, ModeError

THREE_PI = 3.0 * math.pi


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and positive, got {value}")
    return value


@dataclass(frozen=True)
class RegimeInputs:
    """f plus a step model: fixed ``tau`` seconds, or ``tau = c / sqrt(N + 1)``."""

    f: float
    tau_model: Literal["fixed", "scaled"] = "fixed"
    tau: float = PLANCK_TIME
    c: float | None = None

    def __post_init__(self):
        f = _positive("f", self.f)
        if f > 1:
            raise DomainError(f"f is a fraction in (0, 1], got {f}")
        object.__setattr__(self, "f", f)
        if self.tau_model == "fixed":
            object.__setattr__(self, "tau", _positive("tau", self.tau))
        elif self.tau_model == "scaled":
            if self.c is None:
                raise DomainError("scaled tau model needs c")
            object.__setattr__(self, "c", _positive("c", self.c))
        else:
            raise DomainError(f"tau_model must be 'fixed' or 'scaled', got {self.tau_model!r}")

    @classmethod
    def fixed(cls, f: float, tau: float = PLANCK_TIME) -> RegimeInputs:
        return cls(f, "fixed", tau)

    @classmethod
    def scaled(cls, f: float, c: float) -> RegimeInputs:
        return cls(f, "scaled", c=c)

    @property
    def lambda_sd(self) -> float:
        return math.sqrt(self.f) * LAMBDA_SD_SCALE

    def step(self, N: int) -> float:
        """tau for an N-step evolution under this model."""
        if self.tau_model == "fixed":
            return self.tau
        return self.c / math.sqrt(N + 1)


class RegimeWindow(NamedTuple):
    lower_bound_s: float
    upper_bound_s: float
    strict: bool
    conflict: bool

    @property
    def empty(self) -> bool:
        return self.conflict or self.upper_bound_s <= self.lower_bound_s


def _require_fixed(inputs: RegimeInputs, what: str):
    if inputs.tau_model != "fixed":
        raise ModeError(f"{what} needs a fixed tau; with tau = c/sqrt(N+1) use tau_scaling_check")


def upper_bound_total_time(inputs: RegimeInputs) -> float:
    """3*pi / (tau * lambda_SD) seconds: N*tau at which z_1 meets the eigenvalue spread."""
    _require_fixed(inputs, "upper_bound_total_time")
    return THREE_PI / (inputs.tau * inputs.lambda_sd)


def stringent_lower_bound(inputs: RegimeInputs) -> float:
    """1e-13 / sqrt(f) seconds, the scale N*tau must greatly exceed for the all-terms condition."""
    return STRINGENT_CONSTANT / math.sqrt(inputs.f)


def validity_window(inputs: RegimeInputs, strict: bool = False,
                    ratio_threshold: float = MUCH_LESS) -> RegimeWindow:
    """Range of total time N*tau over which the approximation can hold.

    Non-strict: (1e-17 s, upper bound).  Strict replaces the lower bound with
    1e-13/sqrt(f).  Both ends are "much" inequalities, so the strict window
    conflicts when lower / ratio_threshold exceeds ratio_threshold * upper.
    """
    upper = upper_bound_total_time(inputs)
    if not strict:
        return RegimeWindow(LESS_STRINGENT_LOWER_BOUND, upper, False, False)
    lower = stringent_lower_bound(inputs)
    conflict = lower / ratio_threshold > ratio_threshold * upper
    return RegimeWindow(lower, upper, True, conflict)


def required_f_for_duration(T: float, tau: float = PLANCK_TIME) -> float:
    """The f whose upper bound equals T seconds: (3*pi / (tau * T * 1e57))**2."""
    T = _positive("T", T)
    tau = _positive("tau", tau)
    return (THREE_PI / (tau * T * LAMBDA_SD_SCALE)) ** 2


def tau_scaling_check(inputs: RegimeInputs, ratio_threshold: float = MUCH_LESS):
    """(satisfied, margin) for c**2 * lambda_SD << 3*pi; margin = c**2 lambda_SD / (3*pi)."""
    if inputs.tau_model != "scaled":
        raise ModeError("tau_scaling_check applies only to tau = c/sqrt(N+1)")
    margin = inputs.c**2 * inputs.lambda_sd / THREE_PI
    return bool(margin <= ratio_threshold), margin


def subsidiary_vs_width_ratio(inputs: RegimeInputs, N: int) -> float:
    """(3*pi/(N+1)) / (tau**2 * lambda_SD), the first subsidiary position over the spread.

    With tau = c/sqrt(N+1) the N dependence cancels and this is 3*pi/(c**2 lambda_SD).
    """
    if int(N) != N or N < 0:
        raise DomainError(f"N must be a non-negative integer, got {N}")
    if inputs.tau_model == "scaled":
        return THREE_PI / (inputs.c**2 * inputs.lambda_sd)
    return (THREE_PI / (N + 1)) / (inputs.tau**2 * inputs.lambda_sd)


def first_subsidiary_lambda(inputs: RegimeInputs) -> float:
    """Commutator eigenvalue 3*pi/c**2 at which the first subsidiary maximum sits (scaled tau)."""
    if inputs.tau_model != "scaled":
        raise ModeError("first_subsidiary_lambda applies only to tau = c/sqrt(N+1)")
    return THREE_PI / inputs.c**2
