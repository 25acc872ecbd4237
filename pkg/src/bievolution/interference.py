"""The interference function I_{m,n}(z) and its scaled variants.

I_{m,n}(z) is the sum of exp(-i*s*z) over all non-increasing sequences of n
integers drawn from 0..m, s being the sequence total.  It is the Gaussian
binomial coefficient [m+n choose n] evaluated at q = exp(-iz), and has three
evaluators here:

* :func:`interference_sum_oracle` enumerates the C(m+n, n) terms,
* :func:`interference_qrecursion` runs the lattice-path recurrence
  ``I[m, n] = I[m, n-1] + exp(-i n z) I[m-1, n]``,
* :func:`interference_product` uses the closed sine-product form in log domain.

Every function treats z as dimensionless; the z = tau**2 * lambda
factorisation happens at the call sites.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .constants import TWO_PI
from .errors import DomainError, EnumerationCapExceeded, TableCapExceeded
from .logcomplex import LogComplex, canonical_phase, log_binomial

SUM_ORACLE_CAP = 10**6
RECURSION_TABLE_CAP = 10**8

# Bounds the (points x factors) work arrays of the vectorised product form.
_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class PathCount:
    """N steps in total, n of them forward and m = N - n backward."""

    N: int
    n: int

    def __post_init__(self):
        for name in ("N", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.N < 0 or self.n < 0:
            raise DomainError(f"N and n must be non-negative, got N={self.N}, n={self.n}")
        if self.n > self.N:
            raise DomainError(f"n={self.n} exceeds N={self.N}")

    @classmethod
    def from_mn(cls, m: int, n: int) -> PathCount:
        return cls(m + n, n)

    @property
    def m(self) -> int:
        return self.N - self.n


@dataclass(frozen=True)
class PhaseArg:
    """A dimensionless phase argument, optionally remembering tau and lambda."""

    z: float
    tau: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.z):
            raise DomainError(f"z must be finite, got {self.z}")

    @classmethod
    def from_step(cls, tau: float, lam: float) -> PhaseArg:
        return cls(tau * tau * lam, tau, lam)

    def __float__(self):
        return float(self.z)


def _z_array(z):
    if isinstance(z, PhaseArg):
        z = z.z
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("z must be finite")
    return arr


def _two_product(a, b):
    """Error-free product: a*b == p + e exactly (Dekker/Veltkamp splitting)."""
    p = a * b
    split = 134217729.0  # 2**27 + 1
    ca = split * a
    a_hi = ca - (ca - a)
    a_lo = a - a_hi
    cb = split * b
    b_hi = cb - (cb - b)
    b_lo = b - b_hi
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def _sin_half_multiple(a, z):
    """sin(a*z/2) accurate to a few ulp even when a*z/2 sits near a multiple of pi.

    The product a*z is carried exactly as p + e; libm reduces p/2 exactly, and
    the rounding residue e enters through the first-order correction.
    """
    p, e = _two_product(np.asarray(a, dtype=float), z)
    half = 0.5 * p
    return np.sin(half) + np.cos(half) * (0.5 * e)


def _half_multiple_angle(a, z):
    """a*z/2 reduced into [-pi, pi], keeping the product rounding residue."""
    p, e = _two_product(float(a), z)
    half = 0.5 * p
    reduced = half - TWO_PI * np.round(half / TWO_PI)
    return reduced + 0.5 * e


def _unit_phasors(k, z):
    """exp(1j*k*z) with the product k*z carried exactly."""
    p, e = _two_product(np.asarray(k, dtype=float), z)
    return np.exp(1j * p) * (1.0 + 1j * e)


@functools.lru_cache(maxsize=256)
def _path_exponents(m: int, n: int) -> np.ndarray:
    # v >= ... >= l >= k, every index in 0..m; one entry per path
    return np.fromiter(
        (sum(seq) for seq in itertools.combinations_with_replacement(range(m + 1), n)),
        dtype=float,
    )


def interference_sum_oracle(pc: PathCount, z, cap: int = SUM_ORACLE_CAP, dps: int | None = None):
    """Evaluate I_{N-n,n}(z) by summing every term of the nested sum.

    Accepts a scalar or an array of z.  Raises EnumerationCapExceeded when the
    C(N, n) term count is above ``cap``.  In double precision the result near a
    zero carries an absolute error of order 1e-16 * C(N, n); with ``dps`` the
    terms (merged by equal exponent) are summed in mpmath at that many digits.
    """
    terms = math.comb(pc.N, pc.n)
    if terms > cap:
        raise EnumerationCapExceeded(f"C({pc.N},{pc.n}) = {terms} terms exceeds cap {cap}")
    zs = _z_array(z)
    s = _path_exponents(pc.m, pc.n)
    flat = zs.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    if dps is not None:
        import mpmath

        counts = np.bincount(s.astype(np.int64))
        exponents = [(int(k), int(c)) for k, c in enumerate(counts) if c]
        with mpmath.workdps(dps):
            for idx, zi in enumerate(flat):
                zm = mpmath.mpf(float(zi))
                out[idx] = complex(mpmath.fsum(c * mpmath.expj(-k * zm) for k, c in exponents))
    else:
        for idx, zi in enumerate(flat):
            phasors = _unit_phasors(-s, zi)
            out[idx] = complex(math.fsum(phasors.real), math.fsum(phasors.imag))
    out = out.reshape(zs.shape)
    return complex(out) if out.ndim == 0 else out


def _qrecursion_mp(m: int, n: int, z: float, dps: int) -> complex:
    import mpmath

    with mpmath.workdps(dps):
        zm = mpmath.mpf(float(z))
        col = [mpmath.mpc(1)] * (m + 1)
        for j in range(1, n + 1):
            w = mpmath.expj(-j * zm)
            for i in range(1, m + 1):
                col[i] = col[i] + w * col[i - 1]
        return complex(col[m])


def _qrecursion_scaled(m: int, n: int, z: np.ndarray):
    """Run the lattice-path recurrence; returns (mantissa, log_scale) arrays.

    Column j holds I[i, j] for i = 0..m.  Along i the recurrence
    x_i = b_i + a x_{i-1} with |a| = 1 is solved in closed form as a cumulative
    sum, and each column is renormalised so the table never overflows.
    """
    z = z.reshape(-1, 1)
    i = np.arange(m + 1, dtype=float)
    col = np.ones((z.shape[0], m + 1), dtype=complex)
    log_scale = np.zeros(z.shape[0])
    for j in range(1, n + 1):
        col = _unit_phasors(-j * i, z) * np.cumsum(_unit_phasors(j * i, z) * col, axis=1)
        peak = np.max(np.abs(col), axis=1)
        peak = np.where(peak > 0, peak, 1.0)
        col /= peak[:, None]
        log_scale += np.log(peak)
    return col[:, m], log_scale


def interference_qrecursion(pc: PathCount, z, cap: int = RECURSION_TABLE_CAP,
                            dps: int | None = None):
    """Evaluate I_{N-n,n}(z) by the O(m*n) lattice-path recurrence.

    Scalar or array z.  Very large results overflow to inf; use
    :func:`interference_product` when magnitudes may exceed ~1e308.  With
    ``dps`` the table is run in mpmath at that many digits, one z at a time.
    """
    if pc.m * pc.n > cap:
        raise TableCapExceeded(f"m*n = {pc.m * pc.n} exceeds table cap {cap}")
    zs = _z_array(z)
    if dps is not None:
        flat = [_qrecursion_mp(pc.m, pc.n, zi, dps) for zi in zs.reshape(-1)]
        out = np.array(flat, dtype=complex).reshape(zs.shape)
        return complex(out) if out.ndim == 0 else out
    mant, log_scale = _qrecursion_scaled(pc.m, pc.n, zs.reshape(-1))
    with np.errstate(over="ignore"):
        out = (mant * np.exp(log_scale)).reshape(zs.shape)
    return complex(out) if out.ndim == 0 else out


def log_interference(pc: PathCount, z):
    """Vectorised sine-product evaluation of I_{N-n,n}(z).

    Returns ``(log_mag, phase)`` arrays shaped like z.  Exact zeros give
    ``log_mag = -inf`` with phase 0; z = 0 gives ``ln C(N, n)``.
    """
    zs = _z_array(z)
    flat = zs.reshape(-1)
    log_mag = np.empty(flat.shape)
    phase = np.empty(flat.shape)
    N, n = pc.N, pc.n
    if n == 0 or pc.m == 0:
        log_mag[:] = 0.0
        phase[:] = 0.0
        return log_mag.reshape(zs.shape), phase.reshape(zs.shape)

    q = np.arange(1, n + 1, dtype=float)
    step = max(1, _CHUNK_ELEMENTS // n)
    for start in range(0, len(flat), step):
        zc = flat[start:start + step][:, None]
        num = _sin_half_multiple(N + 1 - q, zc)
        den = _sin_half_multiple(q, zc)
        with np.errstate(divide="ignore", invalid="ignore"):
            lm = np.log(np.abs(num)).sum(axis=1) - np.log(np.abs(den)).sum(axis=1)
        flips = (num < 0).sum(axis=1) + (den < 0).sum(axis=1)
        ph = -_half_multiple_angle(n * (N - n), zc[:, 0]) + np.pi * (flips % 2)
        log_mag[start:start + step] = lm
        phase[start:start + step] = ph

    singular = np.isnan(log_mag) | (log_mag == np.inf)
    zero_arg = flat == 0.0
    log_mag[zero_arg] = log_binomial(N, n)
    phase[zero_arg] = 0.0
    # A denominator can only vanish exactly at z = 0; anything else is a guard.
    fallback = singular & ~zero_arg
    if np.any(fallback):
        mant, scale = _qrecursion_scaled(pc.m, n, flat[fallback])
        with np.errstate(divide="ignore"):
            log_mag[fallback] = np.log(np.abs(mant)) + scale
        phase[fallback] = np.angle(mant)
    is_zero = log_mag == -np.inf
    phase = np.where(is_zero, 0.0, canonical_phase(phase))
    return log_mag.reshape(zs.shape), np.asarray(phase).reshape(zs.shape)


def interference_product(pc: PathCount, z) -> LogComplex:
    """I_{N-n,n}(z) from the closed product form, as a :class:`LogComplex`."""
    zs = _z_array(z)
    if zs.ndim != 0:
        raise DomainError("interference_product takes a scalar z; use log_interference")
    log_mag, phase = log_interference(pc, zs)
    return LogComplex(float(log_mag), float(phase))


def log_scaling_function(pc: PathCount, z):
    """ln F_{N,n}(z), vectorised; F is C(N, n) up to z = 2*pi/(N+1), (2/z)^n/n! beyond."""
    zs = _z_array(z)
    if np.any(zs < 0):
        raise DomainError("the scaling function is defined for z >= 0")
    origin = log_binomial(pc.N, pc.n)
    tail_branch = zs > TWO_PI / (pc.N + 1)
    with np.errstate(divide="ignore"):
        tail = pc.n * np.log(2.0 / np.where(tail_branch, zs, 1.0)) - math.lgamma(pc.n + 1)
    out = np.where(tail_branch, tail, origin)
    return float(out) if out.ndim == 0 else out


def scaling_function(pc: PathCount, z) -> LogComplex:
    """F_{N,n}(z) as a real, positive :class:`LogComplex`."""
    zs = _z_array(z)
    if zs.ndim != 0:
        raise DomainError("scaling_function takes a scalar z; use log_scaling_function")
    return LogComplex(log_scaling_function(pc, zs), 0.0)


def scaled_interference(pc: PathCount, z):
    """Y = I / F, formed from the log-domain difference so neither side overflows."""
    zs = _z_array(z)
    if np.any(zs < 0):
        raise DomainError("Y is defined for z >= 0")
    log_mag, phase = log_interference(pc, zs)
    out = np.exp(log_mag - log_scaling_function(pc, zs)) * np.exp(1j * phase)
    return complex(out) if np.ndim(out) == 0 else out


def rescaled_interference(pc: PathCount, z):
    """Y with its argument compressed by N+1: Y_{N-n,n}(z / (N+1))."""
    zs = _z_array(z)
    if np.any(zs < 0):
        raise DomainError("the rescaled function is defined for z >= 0")
    return scaled_interference(pc, zs / (pc.N + 1))


def abs_scaled(pc: PathCount, z):
    """|Y_{N-n,n}(z)|, real-valued and vectorised."""
    return np.abs(scaled_interference(pc, z))
