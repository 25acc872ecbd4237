"""Analytic landmarks of |I_{N-n,n}(z)| and numerical checks on them.

Landmarks come from the sine-product form: zeros where a numerator vanishes,
unit-modulus points where every factor has modulus one, subsidiary maxima
near z_m = (2m+1)pi/(N+1) with height ~ (2/z)^n / n!, and quadratic models of
the principal and subsidiary peaks.

Every landmark lives at z = 2*pi*p/d with p/d rational, and I is a Gaussian
binomial in q = exp(-iz).  At a primitive d-th root of unity the q-Lucas
theorem gives the exact value, so candidates that sit on a vanishing
*denominator* are classified exactly instead of being trusted blindly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .constants import MUCH_LESS, TWO_PI
from .errors import BracketError, DomainError
from .interference import PathCount, log_interference
from .logcomplex import log_binomial

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SubsidiaryMaximum(NamedTuple):
    m: int
    z: float
    bound_log_mag: float
    bound_valid: bool


class PeakWidths(NamedTuple):
    eps_prin: float
    eps_sub: float
    bound_prin: float
    bound_sub: float
    within_bounds: bool


@dataclass
class FeatureReport:
    zeros: list = field(default_factory=list)
    unity_points_A: list = field(default_factory=list)
    unity_points_B: list = field(default_factory=list)
    subsidiary: list = field(default_factory=list)
    widths: PeakWidths | None = None


def _reduced(k: int, d: int) -> tuple[int, int]:
    g = math.gcd(k, d)
    return k // g, d // g


def vanishes_at_root(pc: PathCount, d: int) -> bool:
    """True when I_{N-n,n} is zero at every primitive d-th root of unity.

    By q-Lucas, [N, n]_q = C(N//d, n//d) * [N % d, n % d]_q there, and the
    second factor is zero exactly when n % d > N % d.
    """
    return d > 1 and pc.n % d > pc.N % d


def modulus_at_root(pc: PathCount, d: int) -> int | None:
    """|I| at a primitive d-th root of unity when it is an integer, else None.

    Covers the cases the landmarks need: d | N+1 and d | N-n give
    C(N//d, n//d) times a factor of unit modulus.
    """
    if d == 1:
        return math.comb(pc.N, pc.n)
    if vanishes_at_root(pc, d):
        return 0
    if (pc.N + 1) % d == 0 or (pc.N - pc.n) % d == 0:
        return math.comb(pc.N // d, pc.n // d)
    return None


def zero_locations(pc: PathCount, z_max: float, genuine_only: bool = True) -> list[float]:
    """Positive zeros z = 2*k*pi/(N+1-q), q = 1..n, up to z_max, sorted.

    Candidates are deduplicated as exact fractions.  With ``genuine_only``,
    candidates where an equal number of denominator factors also vanish (so the
    singularity is removable and I is nonzero) are dropped.
    """
    if not z_max > 0:
        raise DomainError(f"z_max must be positive, got {z_max}")
    found = set()
    for q in range(1, pc.n + 1):
        d0 = pc.N + 1 - q
        k_max = int(math.floor(z_max * d0 / TWO_PI)) + 1
        for k in range(1, k_max + 1):
            p, d = _reduced(k, d0)
            if TWO_PI * p / d > z_max:
                break
            found.add((p, d))
    if genuine_only:
        found = {(p, d) for p, d in found if vanishes_at_root(pc, d)}
    return sorted(TWO_PI * p / d for p, d in found)


def unit_modulus_points(
    pc: PathCount, z_max: float, include_b: bool = True, genuine_only: bool = True
) -> tuple[list[float], list[float]]:
    """Points where |I| = 1: family A at 2k*pi/(N+1), family B at 2k*pi/(N-n).

    With ``genuine_only``, points whose root-of-unity order d is <= n are
    dropped: a denominator vanishes there too and |I| = C(N//d, n//d).
    """
    if not z_max > 0:
        raise DomainError(f"z_max must be positive, got {z_max}")
    if include_b and pc.n == pc.N:
        raise DomainError("family B needs N - n > 0")

    def family(period: int) -> list[float]:
        out = []
        k = 1
        while TWO_PI * k / period <= z_max:
            _, d = _reduced(k, period)
            if not genuine_only or d > pc.n:
                out.append(TWO_PI * k / period)
            k += 1
        return out

    family_a = family(pc.N + 1)
    family_b = family(pc.N - pc.n) if include_b else []
    return family_a, family_b


def subsidiary_position(pc: PathCount, m: int) -> float:
    return (2 * m + 1) * math.pi / (pc.N + 1)


def log_peak_bound(n: int, z):
    """ln[(2/z)^n / n!], the approximate height of |I| at a subsidiary maximum."""
    return n * np.log(2.0 / np.asarray(z, dtype=float)) - math.lgamma(n + 1)


def subsidiary_maxima(
    pc: PathCount, m_max: int, ratio_threshold: float = MUCH_LESS
) -> list[SubsidiaryMaximum]:
    """Predicted subsidiary maxima m = 1..m_max with their height bound.

    ``bound_valid`` reads the condition z_m << 4*pi/n as
    z_m <= ratio_threshold * 4*pi/n.
    """
    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    out = []
    for m in range(1, m_max + 1):
        z_m = subsidiary_position(pc, m)
        valid = pc.n == 0 or z_m <= ratio_threshold * 4.0 * math.pi / pc.n
        out.append(SubsidiaryMaximum(m, z_m, float(log_peak_bound(pc.n, z_m)), valid))
    return out


def peak_curvature(pc: PathCount) -> float:
    """n(N-n)(N+1), the second-order coefficient shared by both quadratic models."""
    return pc.n * (pc.N - pc.n) * (pc.N + 1)


def _check_eps(pc: PathCount, eps: float):
    if abs(eps) > 0.5 * math.pi / (pc.N + 1):
        warnings.warn(
            f"|eps| = {abs(eps):.3g} is outside the quadratic model's range "
            f"(0.5*pi/(N+1) = {0.5 * math.pi / (pc.N + 1):.3g})",
            stacklevel=3,
        )


def quadratic_model_principal(pc: PathCount, eps: float) -> float:
    """C(N,n) * [1 - eps^2 n(N-n)(N+1)/24]."""
    _check_eps(pc, eps)
    return math.exp(log_binomial(pc.N, pc.n)) * (1.0 - eps * eps * peak_curvature(pc) / 24.0)


def quadratic_model_subsidiary(pc: PathCount, m: int, eps: float) -> float:
    """(2/z_m)^n / n! * [1 - eps^2 n(N-n)(N+1)/8]."""
    _check_eps(pc, eps)
    peak = math.exp(log_peak_bound(pc.n, subsidiary_position(pc, m)))
    return peak * (1.0 - eps * eps * peak_curvature(pc) / 8.0)


def peak_widths(pc: PathCount) -> PeakWidths:
    """Half-widths where the quadratic models reach zero, and their k-bounds.

    ``within_bounds`` reports whether eps_prin <= 4.9/(sqrt(k) N) and
    eps_sub <= 2.8/(sqrt(k) N), with k = min(n, N-n).  These bounds are
    leading-order estimates; eps_sub exceeds its bound for every (N, n)
    because sqrt(8) > 2.8.
    """
    if pc.n == 0 or pc.n == pc.N:
        raise DomainError("peak widths need 1 <= n <= N-1")
    curv = peak_curvature(pc)
    eps_prin = math.sqrt(24.0 / curv)
    eps_sub = math.sqrt(8.0 / curv)
    k = min(pc.n, pc.N - pc.n)
    bound_prin = 4.9 / (math.sqrt(k) * pc.N)
    bound_sub = 2.8 / (math.sqrt(k) * pc.N)
    return PeakWidths(eps_prin, eps_sub, bound_prin, bound_sub,
                      eps_prin <= bound_prin and eps_sub <= bound_sub)


def _objective(pc: PathCount, scaled: bool):
    def g(z):
        log_mag, _ = log_interference(pc, z)
        if scaled:
            log_mag = log_mag - log_peak_bound(pc.n, z)
        return float(log_mag)
    return g


def golden_section_max(f, a: float, b: float, tol: float, max_iter: int = 500):
    """Golden-section search for the maximum of a unimodal f on [a, b]."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def locate_extremum_numeric(pc: PathCount, bracket, scaled: bool = True):
    """Refine a maximum of |I| inside ``bracket``; returns (z_peak, ln|I(z_peak)|).

    With ``scaled`` (the default) the objective is |I(z)| divided by the
    height envelope (2/z)^n/n!, i.e. |Y| beyond the first zero.  Its maxima sit
    at z_m; the raw |I| maxima are dragged towards the origin by the envelope,
    by about 4.6% at m = 1.  A bracket containing z = 0 returns the principal
    maximum directly.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise BracketError(f"empty bracket ({lo}, {hi})")
    if pc.n == 0 or pc.m == 0:
        raise DomainError("I is identically 1 when n = 0 or n = N; there is no peak")
    if lo <= 0.0 <= hi:
        return 0.0, log_binomial(pc.N, pc.n)
    if lo < 0.0 or hi > 4.0 * math.pi / pc.n:
        raise BracketError(f"bracket ({lo}, {hi}) must lie within (0, 4*pi/n)")
    if scaled:
        # subsidiary maxima start after the first zero at 2*pi/N
        lo = max(lo, TWO_PI / pc.N)
        if lo >= hi:
            raise BracketError(f"bracket ends before the first zero at 2*pi/N = {TWO_PI / pc.N}")
    g = _objective(pc, scaled)
    g_lo, g_mid, g_hi = g(lo), g(0.5 * (lo + hi)), g(hi)
    if g_mid < g_lo and g_mid < g_hi:
        raise BracketError(f"bracket ({lo}, {hi}) does not straddle a maximum")
    tol = 1e-4 * math.pi / (pc.N + 1)
    z_peak = golden_section_max(g, lo, hi, tol)
    log_mag, _ = log_interference(pc, z_peak)
    return z_peak, float(log_mag)


def subsidiary_bracket(pc: PathCount, m: int, half_width: float | None = None):
    """Bracket of half-width pi/(2(N+1)) (default) around z_m."""
    if half_width is None:
        half_width = 0.5 * math.pi / (pc.N + 1)
    z_m = subsidiary_position(pc, m)
    return z_m - half_width, z_m + half_width


def refine_subsidiary(pc: PathCount, m: int):
    """Locate the m-th subsidiary maximum; returns (z_peak, ln|I|, ln|I| - ln bound(z_peak))."""
    z_peak, log_mag = locate_extremum_numeric(pc, subsidiary_bracket(pc, m))
    return z_peak, log_mag, log_mag - float(log_peak_bound(pc.n, z_peak))


def quadratic_model_deviation(pc: PathCount, kind: str, window: float | None = None,
                              points: int = 401, fraction: float = 0.5,
                              center: str = "predicted"):
    """Largest relative gap between a quadratic peak model and the numerical peak.

    ``kind="principal"`` compares 1 - eps^2 c/24 with |I(eps)|/C(N,n).
    ``kind="subsidiary"`` compares 1 - eps^2 c/8 with |Y(z0 + eps)|, where z0
    is a = 3*pi/(N+1) (``center="predicted"``) or the numerically located peak
    z* with |Y| normalised to its value there (``center="located"``).  Offsets
    run over |eps| <= min(fraction * root, window).  Returns (deviation, z0).
    """
    widths = peak_widths(pc)
    if kind == "principal":
        root, z0 = widths.eps_prin, 0.0
    elif kind == "subsidiary":
        root = widths.eps_sub
        if center == "predicted":
            z0 = subsidiary_position(pc, 1)
        elif center == "located":
            z0, _, _ = refine_subsidiary(pc, 1)
        else:
            raise DomainError(f"center must be 'predicted' or 'located', got {center!r}")
    else:
        raise DomainError(f"kind must be 'principal' or 'subsidiary', got {kind!r}")
    reach = fraction * root if window is None else min(fraction * root, window)
    eps = np.linspace(-reach, reach, points)
    log_mag, _ = log_interference(pc, z0 + eps)
    if kind == "principal":
        numeric = np.exp(log_mag - log_binomial(pc.N, pc.n))
        model = 1.0 - eps**2 * peak_curvature(pc) / 24.0
    else:
        log_y = log_mag - log_peak_bound(pc.n, z0 + eps)
        if center == "located":
            log_y = log_y - float(log_y[points // 2])
        numeric = np.exp(log_y)
        model = 1.0 - eps**2 * peak_curvature(pc) / 8.0
    return float(np.max(np.abs(model - numeric) / numeric)), z0


def log_local_scale(pc: PathCount, z, points: int = 17):
    """ln max |I| over [z - pi/(N+1), z + pi/(N+1)] for each landmark z (vectorised)."""
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    half = math.pi / (pc.N + 1)
    offsets = np.linspace(-half, half, points)
    grid = np.maximum(zs[:, None] + offsets[None, :], 0.0)
    log_mag, _ = log_interference(pc, grid)
    out = np.max(log_mag, axis=1)
    return float(out[0]) if np.ndim(z) == 0 else out


def local_scale(pc: PathCount, z: float, points: int = 17) -> float:
    """max |I| over [z - pi/(N+1), z + pi/(N+1)], the neighbourhood of a landmark."""
    return math.exp(log_local_scale(pc, float(z), points))


def feature_report(pc: PathCount, z_max: float | None = None, m_max: int = 5,
                   ratio_threshold: float = MUCH_LESS) -> FeatureReport:
    """Collect zeros, unit-modulus points, subsidiary maxima and widths."""
    if pc.n == 0:
        return FeatureReport()
    if z_max is None:
        z_max = 4.0 * math.pi / pc.n
    report = FeatureReport()
    report.zeros = zero_locations(pc, z_max)
    report.unity_points_A, report.unity_points_B = unit_modulus_points(
        pc, z_max, include_b=pc.n < pc.N)
    report.subsidiary = subsidiary_maxima(pc, m_max, ratio_threshold)
    if 0 < pc.n < pc.N:
        report.widths = peak_widths(pc)
    return report
