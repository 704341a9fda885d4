import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openheat.errors import PoleError
from openheat.specfun import CubicRoots, boson_heat, log_gamma, solve_cubic, solve_quadratic, trigamma

# Frozen from mpmath at 40 digits.
LOG_GAMMA_25_15 = complex(-0.2271122407932273, 1.1712929346646030)
TRIGAMMA_1_5 = complex(0.0199999999995517, -0.1986556763597955)
BOSON_1 = 0.7240616609663105
BOSON_100 = 5.535586106946950e-83
CHO_ROOTS = (
    complex(-0.06676543144782437, 0.0),
    complex(-0.016617284276087817, -1.2237258457493326),
    complex(-0.016617284276087817, 1.2237258457493326),
)


def test_boson_heat_values():
    assert boson_heat(1.0) == pytest.approx(BOSON_1, rel=1e-14)
    assert boson_heat(0.0) == 1.0
    assert boson_heat(100.0) == pytest.approx(BOSON_100, rel=1e-12)


def test_boson_heat_series_branch_is_continuous():
    x = np.array([1e-2 * (1 - 1e-12), 1e-2 * (1 + 1e-12)])
    y = boson_heat(x)
    assert abs(y[0] - y[1]) < 1e-14
    small = np.array([1e-8, 1e-4, 5e-3])
    exact = (small / np.sinh(small)) ** 2
    np.testing.assert_allclose(boson_heat(small), exact, rtol=1e-14)


def test_boson_heat_monotone_and_bounded():
    x = np.linspace(0.0, 60.0, 5001)
    y = boson_heat(x)
    assert np.all(np.diff(y) < 0)
    assert np.all((y > 0) & (y <= 1))


def test_boson_heat_large_argument_no_overflow():
    with np.errstate(over="raise", invalid="raise"):
        y = boson_heat(np.array([400.0, 800.0, 1e4]))
    assert np.all(np.isfinite(y)) and np.all(y >= 0)


def test_boson_heat_rejects_negative():
    with pytest.raises(ValueError):
        boson_heat(-1.0)


def test_log_gamma_oracle():
    assert abs(log_gamma(2.5 + 1.5j) - LOG_GAMMA_25_15) < 1e-14


def test_log_gamma_real_matches_lgamma():
    for x in (0.1, 0.5, 1.0, 2.0, 7.3, 55.0, 170.5):
        assert log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-14, abs=1e-14)


def test_log_gamma_exp_recovers_gamma():
    z = 0.3 + 2.0j
    # Gamma(z+1) = z Gamma(z), compared modulo 2 pi i.
    diff = log_gamma(z + 1) - log_gamma(z) - cmath.log(z)
    assert abs(diff.real) < 1e-13
    assert abs(math.remainder(diff.imag, 2 * math.pi)) < 1e-13


def test_trigamma_at_one():
    assert abs(trigamma(1.0) - math.pi ** 2 / 6) < 1e-12


def test_trigamma_oracle():
    assert abs(trigamma(1 + 5j) - TRIGAMMA_1_5) < 1e-14


def test_trigamma_poles():
    for z in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            trigamma(z)


def test_trigamma_returns_real_for_real_input():
    assert isinstance(trigamma(2.5), float)
    out = trigamma(np.array([0.5, 1.5, 3.0]))
    assert out.dtype == float


def _identity_points(n=100, seed=1):
    rng = np.random.default_rng(seed)
    return rng.uniform(0.05, 30.0, n) + 1j * rng.uniform(-30.0, 30.0, n)


def test_trigamma_recurrence():
    z = _identity_points()
    lhs = trigamma(z + 1)
    rhs = trigamma(z) - 1.0 / z ** 2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)


def test_trigamma_conjugation():
    z = _identity_points(seed=2)
    np.testing.assert_allclose(trigamma(np.conj(z)), np.conj(trigamma(z)), rtol=1e-13, atol=0)


def test_trigamma_reflection():
    # psi'(1-z) + psi'(z) = pi^2 / sin^2(pi z)
    z = np.array([0.3 + 0.2j, 0.7 - 1.1j, 0.25 + 0.0j])
    np.testing.assert_allclose(trigamma(1 - z) + trigamma(z), np.pi ** 2 / np.sin(np.pi * z) ** 2, rtol=1e-12)


def test_trigamma_left_half_plane():
    # recurrence run backwards from the right half plane
    z = -2.5 + 0.7j
    expected = trigamma(z + 3) + 1 / z ** 2 + 1 / (z + 1) ** 2 + 1 / (z + 2) ** 2
    assert abs(trigamma(z) - expected) < 1e-12 * abs(expected)


def test_cubic_example_roots():
    roots = solve_cubic(0.1, 1.5, 0.1)
    assert isinstance(roots, CubicRoots)
    assert len(roots) == 3
    for got, want in zip(roots, CHO_ROOTS):
        assert abs(got - want) < 1e-14


def test_cubic_simple_cases():
    np.testing.assert_allclose(sorted(r.real for r in solve_cubic(-6.0, 11.0, -6.0)), [1, 2, 3], atol=1e-13)
    triple = solve_cubic(3.0, 3.0, 1.0)
    for r in triple:
        assert abs(r + 1) < 1e-4


def test_cubic_pair_is_exact_conjugate():
    r = solve_cubic(0.1, 1.5, 0.1)
    assert r[1] == r[2].conjugate()


def test_quadratic():
    a, b = solve_quadratic(0.1, 0.5)
    assert a == b.conjugate()
    assert abs(a * a + 0.1 * a + 0.5) < 1e-15
    r = solve_quadratic(1e8, 1.0)
    assert abs(r[1] + 1e-8) < 1e-22  # stable small root


def _check_cubic(c2, c1, c0):
    roots = solve_cubic(c2, c1, c0)
    scale = max(1.0, abs(c2), abs(c1), abs(c0))
    for r in roots:
        assert abs(r ** 3 + c2 * r ** 2 + c1 * r + c0) < 1e-10 * scale * max(1.0, abs(r)) ** 3
    return roots


def test_random_cubic_residuals():
    rng = np.random.default_rng(10)
    coeffs = rng.uniform(-10, 10, (1000, 3))
    for c2, c1, c0 in coeffs:
        _check_cubic(c2, c1, c0)


def test_random_cubic_reconstruction():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        c2, c1, c0 = rng.uniform(-10, 10, 3)
        r = _check_cubic(c2, c1, c0)
        poly = np.poly(np.array(r))
        np.testing.assert_allclose(poly[1:].real, [c2, c1, c0], atol=1e-9 * max(1, abs(c2), abs(c1), abs(c0)))


coef = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(coef, coef, coef)
def test_cubic_vieta_property(c2, c1, c0):
    r = solve_cubic(c2, c1, c0)
    scale = max(1.0, abs(c2), abs(c1) ** 0.5, abs(c0) ** (1 / 3))
    assert abs(sum(r) + c2) < 1e-9 * scale
    nonreal = [x for x in r if x.imag != 0]
    assert len(nonreal) in (0, 2)
    if nonreal:
        assert nonreal[0] == nonreal[1].conjugate()


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 50), st.floats(-50, 50))
def test_trigamma_recurrence_property(x, y):
    z = complex(x, y)
    lhs = trigamma(z + 1)
    rhs = trigamma(z) - 1 / z ** 2
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 300.0))
def test_boson_heat_in_unit_interval(x):
    y = boson_heat(x)
    assert 0.0 <= y <= 1.0
