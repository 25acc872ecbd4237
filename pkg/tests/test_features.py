import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bievolution.errors import BracketError, DomainError
from bievolution.features import (
    feature_report,
    golden_section_max,
    local_scale,
    locate_extremum_numeric,
    log_local_scale,
    log_peak_bound,
    modulus_at_root,
    peak_widths,
    quadratic_model_deviation,
    quadratic_model_principal,
    quadratic_model_subsidiary,
    refine_subsidiary,
    subsidiary_maxima,
    subsidiary_position,
    unit_modulus_points,
    vanishes_at_root,
    zero_locations,
)
from bievolution.interference import PathCount, interference_sum_oracle, log_interference


def gaussian_binomial_at_root(N, n, d):
    """[N, n]_q at q = exp(2*pi*i/d) from the q-Pascal rule, in exact-ish complex arithmetic."""
    q = cmath.exp(2j * math.pi / d)
    row = [1.0 + 0j]
    for total in range(1, N + 1):
        new = [1.0 + 0j] * (total + 1)
        for k in range(1, total):
            new[k] = row[k - 1] + q**k * row[k]
        row = new
    return row[n]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), st.data())
def test_q_lucas_classification(N, data):
    n = data.draw(st.integers(0, N))
    d = data.draw(st.integers(2, 12))
    value = abs(gaussian_binomial_at_root(N, n, d))
    pc = PathCount(N, n)
    if vanishes_at_root(pc, d):
        assert value < 1e-9 * math.comb(N, n)
    expected = modulus_at_root(pc, d)
    if expected is not None:
        assert value == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_first_landmarks_n1():
    # [DERIVED] formula arithmetic
    pc = PathCount(8000, 1)
    assert zero_locations(pc, 0.001)[0] == pytest.approx(2 * math.pi / 8000)
    assert subsidiary_position(pc, 1) == pytest.approx(3 * math.pi / 8001)


def test_zero_locations_small_case_against_oracle():
    pc = PathCount(9, 3)
    zeros = zero_locations(pc, 4 * math.pi / 3)
    assert zeros == sorted(set(zeros))
    for z in zeros:
        assert abs(interference_sum_oracle(pc, z)) < 1e-10
    # candidates dropped by the filter are genuinely nonzero
    every = zero_locations(pc, 4 * math.pi / 3, genuine_only=False)
    for z in set(every) - set(zeros):
        assert abs(interference_sum_oracle(pc, z)) > 0.5


def test_spurious_candidates_are_filtered():
    # z = 2*pi/29 is a candidate zero for N=2000, n=50 but |I| = C(68, 1) there
    pc = PathCount(2000, 50)
    every = zero_locations(pc, 4 * math.pi / 50, genuine_only=False)
    genuine = zero_locations(pc, 4 * math.pi / 50)
    spurious = 2 * math.pi / 29
    assert any(abs(z - spurious) < 1e-15 for z in every)
    assert not any(abs(z - spurious) < 1e-15 for z in genuine)
    log_mag, _ = log_interference(pc, spurious)
    assert math.exp(float(log_mag)) == pytest.approx(68, rel=1e-9)


def test_unit_modulus_points_small_case():
    pc = PathCount(10, 3)
    a, b = unit_modulus_points(pc, 4 * math.pi / 3)
    for z in a + b:
        assert abs(interference_sum_oracle(pc, z)) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        unit_modulus_points(PathCount(4, 4), 1.0)
    assert unit_modulus_points(PathCount(4, 4), 1.0, include_b=False)[1] == []


def test_local_scale_vectorised():
    pc = PathCount(200, 10)
    z = np.array([0.1, 0.3])
    vec = log_local_scale(pc, z)
    assert vec.shape == (2,)
    assert math.log(local_scale(pc, 0.3)) == pytest.approx(vec[1])


def test_subsidiary_maxima_bound_flags():
    pc = PathCount(8000, 50)
    peaks = subsidiary_maxima(pc, 40, ratio_threshold=0.05)
    valid = [p.m for p in peaks if p.bound_valid]
    # z_m <= 0.05 * 4*pi/50  <=>  2m+1 <= 0.2 * 8001 / 50
    assert valid == list(range(1, 16))
    assert peaks[0].bound_log_mag == pytest.approx(float(log_peak_bound(50, 3 * math.pi / 8001)))
    with pytest.raises(DomainError):
        subsidiary_maxima(pc, 0)


def test_refined_peak_near_prediction():
    pc = PathCount(2000, 10)
    z_peak, log_mag, log_ratio = refine_subsidiary(pc, 1)
    assert z_peak == pytest.approx(3 * math.pi / 2001, rel=0.02)
    assert abs(log_ratio) < 0.02
    assert log_mag == pytest.approx(float(log_interference(pc, z_peak)[0]))


def test_raw_argmax_is_pulled_inward():
    pc = PathCount(8000, 10)
    z_scaled, _ = locate_extremum_numeric(pc, (0.0008, 0.0016))
    z_raw, _ = locate_extremum_numeric(pc, (0.0008, 0.0016), scaled=False)
    assert z_raw < z_scaled


def test_locate_bracket_errors():
    pc = PathCount(200, 10)
    assert locate_extremum_numeric(pc, (-0.01, 0.01)) == (0.0, pytest.approx(math.log(math.comb(200, 10))))
    with pytest.raises(BracketError):
        locate_extremum_numeric(pc, (0.2, 0.1))
    with pytest.raises(BracketError):
        locate_extremum_numeric(pc, (0.1, 4 * math.pi / 10 + 1))
    with pytest.raises(DomainError):
        locate_extremum_numeric(PathCount(5, 0), (0.1, 0.2))


def test_golden_section():
    z = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert z == pytest.approx(0.3, abs=1e-9)


def test_peak_widths_formulas():
    pc = PathCount(8000, 1)
    w = peak_widths(pc)
    curv = 1 * 7999 * 8001
    assert w.eps_prin == pytest.approx(math.sqrt(24 / curv))
    assert w.eps_sub == pytest.approx(math.sqrt(8 / curv))
    # the roots lie past the model's nominal range, hence the warnings
    with pytest.warns(UserWarning):
        assert quadratic_model_principal(pc, w.eps_prin) == pytest.approx(0.0, abs=1e-9)
    with pytest.warns(UserWarning):
        assert quadratic_model_subsidiary(pc, 1, w.eps_sub) == pytest.approx(0.0, abs=1e-12)
    assert quadratic_model_principal(pc, 0.0) == pytest.approx(8000)
    with pytest.raises(DomainError):
        peak_widths(PathCount(10, 0))


def test_eps_sub_never_within_its_bound():
    # sqrt(8/(n(N-n)(N+1))) > 2.8/(sqrt(k) N) for every N, n since sqrt(8) > 2.8
    for N in (2, 10, 100, 10**4):
        for n in range(1, N, max(1, N // 7)):
            w = peak_widths(PathCount(N, n))
            assert w.eps_sub > w.bound_sub
            assert not w.within_bounds


def test_quadratic_model_warns_outside_range():
    pc = PathCount(100, 5)
    with pytest.warns(UserWarning):
        quadratic_model_principal(pc, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        quadratic_model_principal(pc, 1e-4)


def test_quadratic_models_n10():
    pc = PathCount(8000, 10)
    for kind in ("principal", "subsidiary"):
        dev, _ = quadratic_model_deviation(pc, kind, window=0.00025)
        assert dev <= 0.05
    with pytest.raises(DomainError):
        quadratic_model_deviation(pc, "other")
    with pytest.raises(DomainError):
        quadratic_model_deviation(pc, "subsidiary", center="elsewhere")


def test_subsidiary_model_centering_n50():
    # characterisation: around a = 3*pi/(N+1) the n = 50 model is ~10% off at
    # |eps| = eps_sub/2; the true peak sits 0.32% above a, and recentring there
    # brings the gap under 4%
    pc = PathCount(8000, 50)
    at_a, z0 = quadratic_model_deviation(pc, "subsidiary", window=0.00025)
    located, z_peak = quadratic_model_deviation(pc, "subsidiary", window=0.00025, center="located")
    assert z0 == pytest.approx(3 * math.pi / 8001)
    assert 0.09 < at_a < 0.11
    assert located < 0.04
    assert z_peak / z0 - 1 == pytest.approx(0.0032, abs=2e-4)


def test_default_threshold_tenth_lets_bound_drift():
    # characterisation: reading "<<" as 0.1 admits peaks whose height is >10% off the bound
    pc = PathCount(8000, 50)
    valid = [p.m for p in subsidiary_maxima(pc, 40, ratio_threshold=0.1) if p.bound_valid]
    assert max(valid) == 31
    _, _, log_ratio = refine_subsidiary(pc, 31)
    assert abs(math.expm1(log_ratio)) > 0.10


def test_feature_report():
    empty = feature_report(PathCount(10, 0))
    assert empty.zeros == [] and empty.subsidiary == [] and empty.widths is None
    report = feature_report(PathCount(200, 10), m_max=3)
    assert len(report.subsidiary) == 3
    assert report.widths is not None
    assert report.zeros[0] == pytest.approx(2 * math.pi / 200)
