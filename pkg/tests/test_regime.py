import math

import pytest
from hypothesis import given, strategies as st

from bievolution.errors import DomainError, ModeError
from bievolution.regime import (
    RegimeInputs,
    first_subsidiary_lambda,
    required_f_for_duration,
    stringent_lower_bound,
    subsidiary_vs_width_ratio,
    tau_scaling_check,
    upper_bound_total_time,
    validity_window,
)

fractions = st.floats(1e-80, 1.0)


def test_upper_bound_values():
    # [DERIVED] 3*pi / (5e-44 * 1e57)
    assert upper_bound_total_time(RegimeInputs.fixed(1.0)) == pytest.approx(1.8849555921538759e-13)
    assert upper_bound_total_time(RegimeInputs.fixed(1e-61)) == pytest.approx(5.96e17, rel=1e-3)
    ratio = upper_bound_total_time(RegimeInputs.fixed(1e-4)) / upper_bound_total_time(
        RegimeInputs.fixed(1e-2))
    assert ratio == pytest.approx(10.0)


def test_inverse_square_root_law():
    values = [upper_bound_total_time(RegimeInputs.fixed(f)) * math.sqrt(f)
              for f in (1.0, 1e-10, 1e-40)]
    assert all(v == pytest.approx(values[0], rel=1e-12) for v in values)


@given(fractions)
def test_round_trip(f):
    T = upper_bound_total_time(RegimeInputs.fixed(f))
    assert required_f_for_duration(T) == pytest.approx(f, rel=1e-10)


def test_required_f():
    # [DERIVED] (3*pi / (5e-44 * 3.156e17 * 1e57))**2
    assert required_f_for_duration(3.156e17) == pytest.approx(3.5672065524636e-61, rel=1e-10)
    assert required_f_for_duration(2e10) / required_f_for_duration(4e10) == pytest.approx(4.0)
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(DomainError):
            required_f_for_duration(bad)


def test_window():
    w = validity_window(RegimeInputs.fixed(1e-6))
    assert w.lower_bound_s == 1e-17
    assert w.upper_bound_s == pytest.approx(1.885e-10, rel=1e-3)
    assert not w.strict and not w.conflict and not w.empty


@given(fractions)
def test_strict_always_conflicts(f):
    w = validity_window(RegimeInputs.fixed(f), strict=True)
    assert w.conflict and w.strict and w.empty
    assert w.lower_bound_s == pytest.approx(stringent_lower_bound(RegimeInputs.fixed(f)))


@given(fractions)
def test_non_strict_never_empty(f):
    w = validity_window(RegimeInputs.fixed(f))
    assert 0 < w.lower_bound_s < w.upper_bound_s


def test_inputs_validation():
    for bad in (0.0, -1.0, 1.5, math.nan):
        with pytest.raises(DomainError):
            RegimeInputs.fixed(bad)
    with pytest.raises(DomainError):
        RegimeInputs.fixed(0.5, tau=0.0)
    with pytest.raises(DomainError):
        RegimeInputs(0.5, "scaled")
    with pytest.raises(DomainError):
        RegimeInputs(0.5, "other")
    assert RegimeInputs.fixed(0.25).lambda_sd == 0.5e57


def test_mode_errors():
    scaled = RegimeInputs.scaled(1.0, 1e-30)
    with pytest.raises(ModeError):
        upper_bound_total_time(scaled)
    with pytest.raises(ModeError):
        validity_window(scaled)
    with pytest.raises(ModeError):
        tau_scaling_check(RegimeInputs.fixed(1.0))
    with pytest.raises(ModeError):
        first_subsidiary_lambda(RegimeInputs.fixed(1.0))


def test_tau_scaling_check():
    lam = 1e57
    c_small = math.sqrt(0.01 * 3 * math.pi / lam)
    ok, margin = tau_scaling_check(RegimeInputs.scaled(1.0, c_small))
    assert ok and margin == pytest.approx(0.01)
    c_edge = math.sqrt(3 * math.pi / lam)
    ok, margin = tau_scaling_check(RegimeInputs.scaled(1.0, c_edge))
    assert not ok and margin == pytest.approx(1.0)
    assert first_subsidiary_lambda(RegimeInputs.scaled(1.0, 2.0)) == pytest.approx(3 * math.pi / 4)


def test_subsidiary_vs_width_ratio_fixed():
    inputs = RegimeInputs.fixed(1.0)
    # [DERIVED] (3*pi/(1e10+1)) / (2.5e-87 * 1e57)
    assert subsidiary_vs_width_ratio(inputs, 10**10) == pytest.approx(3.7699e20, rel=1e-4)
    assert subsidiary_vs_width_ratio(inputs, 2 * 500 + 1) == pytest.approx(
        subsidiary_vs_width_ratio(inputs, 500) / 2)
    # ratio of one: z_1 equals tau^2 lambda_SD
    N = 3 * math.pi / (inputs.tau**2 * inputs.lambda_sd) - 1
    assert subsidiary_vs_width_ratio(inputs, round(N)) == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(DomainError):
        subsidiary_vs_width_ratio(inputs, -1)


def test_scaled_ratio_independent_of_N():
    inputs = RegimeInputs.scaled(1e-6, 1e-30)
    values = [subsidiary_vs_width_ratio(inputs, N) for N in (10, 1000, 10**6, 10**12)]
    assert all(v == pytest.approx(values[0], rel=1e-12) for v in values)
    # same as the fixed-tau ratio evaluated with tau = c/sqrt(N+1)
    N = 999
    fixed = RegimeInputs.fixed(1e-6, tau=inputs.step(N))
    assert subsidiary_vs_width_ratio(fixed, N) == pytest.approx(values[0], rel=1e-12)
