"""Self-check suites run by ``bievolution verify``."""

from __future__ import annotations

import math
import time
from typing import Callable, NamedTuple

import numpy as np

from .features import (
    log_local_scale,
    quadratic_model_deviation,
    refine_subsidiary,
    subsidiary_position,
    unit_modulus_points,
    zero_locations,
)
from .interference import (
    PathCount,
    interference_qrecursion,
    interference_sum_oracle,
    log_interference,
)
from .regime import RegimeInputs, required_f_for_duration, upper_bound_total_time, validity_window
from .toy import enumerate_S, random_universe, reordered_S_approx, spectral_S, symmetric_evolve


class SuiteResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float


def _product_complex(pc, z):
    log_mag, phase = log_interference(pc, z)
    return np.exp(log_mag) * np.exp(1j * phase)


def suite_oracles(full: bool) -> str:
    """Sum oracle, recurrence (30 digits) and product form agree to relative 1e-9."""
    max_total, per_pair = (14, 100) if full else (10, 20)
    rng = np.random.default_rng(1)
    worst = worst_fast = 0.0
    for total in range(max_total + 1):
        for n in range(total + 1):
            pc = PathCount(total, n)
            z = rng.uniform(0.0, 2 * math.pi, per_pair)
            scale = math.comb(total, n)
            a = interference_sum_oracle(pc, z, dps=30)
            b = interference_qrecursion(pc, z, dps=30)
            c = _product_complex(pc, z)
            for diff in (a - b, a - c, b - c):
                worst = max(worst, float(np.max(np.abs(diff) / np.abs(a))))
            # the double-precision evaluators, against the C(N, n) scale
            fast = (interference_sum_oracle(pc, z), interference_qrecursion(pc, z))
            for x in fast:
                worst_fast = max(worst_fast, float(np.max(np.abs(x - c))) / scale)
    if worst > 1e-9 or worst_fast > 1e-13:
        raise AssertionError(f"oracle disagreement {worst:.3g} (double precision {worst_fast:.3g})")
    return f"max relative disagreement {worst:.2e}, double precision {worst_fast:.2e} of C(N,n)"


def suite_conjugation(full: bool) -> str:
    """I(-z) = conj(I(z)) and I_{m,n} = I_{n,m}, checked against the sum oracle."""
    rng = np.random.default_rng(2)
    worst = 0.0
    for total in range(1, 13 if full else 9):
        for n in range(total + 1):
            pc, swapped = PathCount(total, n), PathCount(total, total - n)
            z = rng.uniform(0.05, 3.0, 10)
            ref = interference_sum_oracle(pc, z)
            for got in (_product_complex(pc, -z), _product_complex(swapped, -z)):
                worst = max(worst, np.max(np.abs(got - np.conj(ref))) / math.comb(total, n))
    if worst > 1e-9:
        raise AssertionError(f"conjugation/symmetry violated by {worst:.3g}")
    return f"max violation {worst:.2e}"


def suite_central_maximum(full: bool) -> str:
    worst = 0.0
    for n in (1, 10, 50):
        pc = PathCount(8000, n)
        log_mag, _ = log_interference(pc, 0.0)
        exact = math.log(math.comb(8000, n))
        worst = max(worst, abs(math.expm1(float(log_mag) - exact)))
    if worst > 1e-9:
        raise AssertionError(f"|I(0)| differs from C(N,n) by {worst:.3g}")
    return f"relative error {worst:.2e}"


def suite_binomial_identity(full: bool) -> str:
    """(U_F + U_B)^N psi0 equals the sum of S_{N-n,n} psi0, by recurrence and enumeration."""
    worst = 0.0
    seeds = range(5) if full else range(2)
    for d in range(1, 5):
        for seed in seeds:
            u = random_universe(d, seed, 0.3)
            for N in range(0, 11):
                rec = symmetric_evolve(u, N)
                worst = max(worst, np.linalg.norm(rec.state - np.sum(rec.components, axis=0)))
                if N <= (10 if full else 6):
                    for n in range(N + 1):
                        direct = enumerate_S(u, N - n, n) @ u.psi0
                        worst = max(worst, np.linalg.norm(direct - rec.components[n]))
    if worst > 1e-9:
        raise AssertionError(f"binomial identity residual {worst:.3g}")
    return f"max residual {worst:.2e}"


def reorder_error_ratios(seed: int, taus=(0.2, 0.1, 0.05), m: int = 2, n: int = 2):
    errs = []
    for tau in taus:
        u = random_universe(2, seed, tau, normalize=True)
        errs.append(np.linalg.norm(enumerate_S(u, m, n) - reordered_S_approx(u, m, n), 2))
    return [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]


def suite_tau_cubed(full: bool) -> str:
    ratios = [r for seed in range(5 if full else 2) for r in reorder_error_ratios(seed)]
    if not all(6.4 <= r <= 9.6 for r in ratios):
        raise AssertionError(f"halving ratios {ratios} outside [6.4, 9.6]")
    return f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]"


def suite_spectral(full: bool) -> str:
    worst = 0.0
    for d in range(1, 5):
        for seed in range(3 if full else 1):
            u = random_universe(d, seed, 0.3)
            for m in range(9):
                for n in range(9 - m):
                    diff = spectral_S(u, m, n) - reordered_S_approx(u, m, n)
                    worst = max(worst, float(np.max(np.abs(diff))))
    if worst > 1e-9:
        raise AssertionError(f"spectral form off by {worst:.3g}")
    return f"max difference {worst:.2e}"


def suite_features(full: bool) -> str:
    Ns = (200, 2000, 8000) if full else (200,)
    worst_zero = worst_unit = 0.0
    for N in Ns:
        for n in (1, 10, 50):
            pc = PathCount(N, n)
            z_max = 4 * math.pi / n
            zeros = np.array(zero_locations(pc, z_max))
            if zeros.size:
                log_mag, _ = log_interference(pc, zeros)
                gap = log_mag - log_local_scale(pc, zeros)
                worst_zero = max(worst_zero, float(np.exp(np.max(gap))))
            pts_a, pts_b = unit_modulus_points(pc, z_max)
            pts = np.array(pts_a + pts_b)
            if pts.size:
                log_mag, _ = log_interference(pc, pts)
                worst_unit = max(worst_unit, float(np.max(np.abs(np.expm1(log_mag)))))
    if worst_zero > 1e-6 or worst_unit > 1e-6:
        raise AssertionError(f"zero ratio {worst_zero:.3g}, unit deviation {worst_unit:.3g}")
    detail = f"zeros {worst_zero:.1e}, unit points {worst_unit:.1e}"
    if full:
        worst_peak = worst_model = 0.0
        for n in (1, 10, 50):
            pc = PathCount(8000, n)
            z1 = subsidiary_position(pc, 1)
            z_peak, _, log_ratio = refine_subsidiary(pc, 1)
            worst_peak = max(worst_peak, abs(z_peak / z1 - 1), abs(math.expm1(log_ratio)))
            for kind in ("principal", "subsidiary"):
                dev, _ = quadratic_model_deviation(pc, kind, window=0.00025, center="located")
                worst_model = max(worst_model, dev)
        if worst_peak > 0.02 or worst_model > 0.05:
            raise AssertionError(f"peak offset {worst_peak:.3g}, model deviation {worst_model:.3g}")
        detail += f", m=1 peak {worst_peak:.1e}, quadratic models {worst_model:.1e}"
    return detail


def suite_regime(full: bool) -> str:
    upper = upper_bound_total_time(RegimeInputs.fixed(1.0))
    f10 = required_f_for_duration(10e9 * 3.156e7)
    conflicts = all(validity_window(RegimeInputs.fixed(f), strict=True).conflict
                    for f in (1.0, 1e-6, 1e-61))
    if not (1.5e-13 <= upper <= 2.5e-13 and 1e-61 <= f10 <= 1e-60 and conflicts):
        raise AssertionError(f"upper {upper:.3g}, f(10 Gyr) {f10:.3g}, conflicts {conflicts}")
    return f"upper bound {upper:.3e} s, f(10 Gyr) {f10:.3e}"


SUITES: list[tuple[str, Callable[[bool], str]]] = [
    ("oracles", suite_oracles),
    ("conjugation", suite_conjugation),
    ("central-maximum", suite_central_maximum),
    ("binomial-identity", suite_binomial_identity),
    ("tau-cubed", suite_tau_cubed),
    ("spectral-form", suite_spectral),
    ("features", suite_features),
    ("regime", suite_regime),
]


def run_suites(level: str = "quick", names=None) -> list[SuiteResult]:
    full = level == "full"
    results = []
    for name, fn in SUITES:
        if names is not None and name not in names:
            continue
        start = time.perf_counter()
        try:
            detail, ok = fn(full), True
        except AssertionError as exc:
            detail, ok = str(exc), False
        results.append(SuiteResult(name, ok, detail, time.perf_counter() - start))
    return results

