import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bievolution.errors import DomainError
from bievolution.logcomplex import LogComplex, canonical_phase, log_binomial

finite = st.floats(-50, 50, allow_nan=False)
phases = st.floats(-20, 20, allow_nan=False)


def test_canonical_phase_range():
    assert canonical_phase(math.pi) == math.pi
    assert canonical_phase(-math.pi) == math.pi
    assert canonical_phase(3 * math.pi) == pytest.approx(math.pi)
    assert canonical_phase(0.5) == 0.5
    out = canonical_phase(np.array([-4.0, 0.0, 7.0]))
    assert np.all((out > -math.pi) & (out <= math.pi))


@given(phases)
def test_canonical_phase_preserves_angle(p):
    q = canonical_phase(p)
    assert -math.pi < q <= math.pi
    assert cmath.exp(1j * q) == pytest.approx(cmath.exp(1j * p), abs=1e-12)


def test_zero_handling():
    z = LogComplex.zero()
    assert z.is_zero and z.phase == 0.0
    assert LogComplex(-math.inf, 1.3).phase == 0.0
    assert z.to_complex() == 0j
    assert (z * LogComplex(3.0, 1.0)).is_zero
    with pytest.raises(ZeroDivisionError):
        LogComplex(1.0) / z


def test_rejects_nan_and_inf():
    with pytest.raises(DomainError):
        LogComplex(math.nan)
    with pytest.raises(DomainError):
        LogComplex(math.inf)


def test_overflowing_conversion():
    big = LogComplex(1000.0, 0.3)
    with pytest.raises(OverflowError):
        big.to_complex()
    # products stay representable in log form
    assert (big * big).log_mag == 2000.0


@given(finite, phases, finite, phases)
def test_multiplication_matches_complex(a, pa, b, pb):
    x, y = LogComplex(a / 10, pa), LogComplex(b / 10, pb)
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), rel=1e-12)
    assert complex(x / y) == pytest.approx(complex(x) / complex(y), rel=1e-12)
    assert complex(x.conjugate()) == pytest.approx(complex(x).conjugate(), rel=1e-12)


def test_from_complex_round_trip():
    for v in (1 + 2j, -3.5, 1e-200j, -1e200 - 1e200j):
        assert LogComplex.from_complex(v).to_complex() == pytest.approx(v, rel=1e-14)


def test_log_binomial_exact_small():
    for N in range(0, 40):
        for n in range(N + 1):
            assert log_binomial(N, n) == pytest.approx(math.log(math.comb(N, n)), rel=1e-14, abs=1e-14)


def test_log_binomial_large_frozen():
    # [DERIVED] mpmath at 40 digits
    assert log_binomial(8000, 50) == pytest.approx(300.72863228040219, rel=1e-14)
    assert log_binomial(10**6, 5 * 10**5) == pytest.approx(693140.04701306368255, rel=1e-14)


def test_log_binomial_domain():
    with pytest.raises(DomainError):
        log_binomial(3, 4)
    with pytest.raises(DomainError):
        log_binomial(-1, 0)
