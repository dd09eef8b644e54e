import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubit_scatter.errors import DomainError
from qubit_scatter.special import (
    E1_SWITCH_RADIUS,
    EULER_GAMMA,
    cosine_integral,
    erf_complex,
    exp_e1_scaled,
    exp_integral_e1,
    sici,
    sine_integral,
)

mpmath.mp.dps = 30


def e1_series_real(x, terms=80):
    """E1(x) = -gamma - ln x - sum (-x)^n / (n n!), summed in exact-ish float order."""
    s = 0.0
    term = 1.0
    for n in range(1, terms):
        term *= -x / n
        s += term / n
    return -EULER_GAMMA - math.log(x) - s


def erf_maclaurin(z, terms=60):
    s = 0j
    for n in range(terms):
        s += (-1) ** n * z ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1))
    return 2 / math.sqrt(math.pi) * s


def mp_e1(z):
    return complex(mpmath.e1(mpmath.mpc(z.real, z.imag)))


# ---- E1 -------------------------------------------------------------------


def test_e1_at_one_matches_series():
    assert exp_integral_e1(1.0) == pytest.approx(0.21938393439552, abs=1e-14)
    assert abs(exp_integral_e1(1.0) - e1_series_real(1.0)) < 1e-14


@pytest.mark.parametrize("r", [1e-6, 1e-3, 0.5, 3.9, 4.1, 10, 100, 1e3, 1e4])
@pytest.mark.parametrize("phase", [0.0, 0.3, -0.7, 1.2, math.pi / 2, -math.pi / 2, 2.5, -3.0])
def test_e1_against_mpmath(r, phase):
    z = r * cmath.exp(1j * phase)
    if z.real < 0 and r > 700:
        # exp(-z) overflows; the scaled form is the usable quantity there
        ref = complex(mpmath.exp(mpmath.mpc(z.real, z.imag)) * mpmath.e1(mpmath.mpc(z.real, z.imag)))
        assert abs(exp_e1_scaled(z) - ref) <= 1e-12 * abs(ref)
        return
    ref = mp_e1(z)
    assert abs(exp_integral_e1(z) - ref) <= 1e-12 * abs(ref)


def test_e1_large_modulus_asymptotic():
    for phase in (0.0, 0.5, -1.0, 1.4):
        z = 100 * cmath.exp(1j * phase)
        lhs = z * cmath.exp(z) * exp_integral_e1(z)
        assert abs(lhs - (1 - 1 / z)) < 1e-3


@pytest.mark.parametrize("phase", [0.0, math.pi / 4, -math.pi / 4, 0.45 * math.pi, -0.45 * math.pi])
def test_e1_asymptotic_remainder_bound(phase):
    # frozen regression constant: |z e^z E1(z) - 1 + 1/z| <= C/|z|^2 with C = 2.5
    for r in (10, 30, 100, 1000):
        z = r * cmath.exp(1j * phase)
        assert abs(z * exp_e1_scaled(z) - 1 + 1 / z) <= 2.5 / r**2


def test_e1_switch_continuity():
    for phase in np.linspace(-3.0, 3.0, 13):
        lo = (E1_SWITCH_RADIUS * (1 - 1e-12)) * cmath.exp(1j * phase)
        hi = (E1_SWITCH_RADIUS * (1 + 1e-12)) * cmath.exp(1j * phase)
        a, b = exp_integral_e1(lo), exp_integral_e1(hi)
        assert abs(a - b) <= 1e-11 * abs(a)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-4, 500), st.floats(-3.1, 3.1))
def test_e1_schwarz_reflection(r, phase):
    z = r * cmath.exp(1j * phase)
    assert abs(exp_integral_e1(z.conjugate()) - exp_integral_e1(z).conjugate()) <= 1e-13 * abs(exp_integral_e1(z))


def test_e1_vectorised_shape():
    z = np.array([[1.0, 2j], [5 - 1j, 0.1 + 0.1j]])
    out = exp_integral_e1(z)
    assert out.shape == (2, 2)
    assert out[0, 1] == pytest.approx(exp_integral_e1(2j))


@pytest.mark.parametrize("z", [0.0, -1.0, -1e-3, complex(-5, 0.0), float("nan"), complex(float("inf"), 0)])
def test_e1_domain_errors(z):
    with pytest.raises(DomainError):
        exp_integral_e1(z)


# ---- si / ci -----------------------------------------------------------------


def test_si_at_zero_and_infinity():
    assert sine_integral(0.0) == pytest.approx(-math.pi / 2, abs=1e-15)
    assert abs(sine_integral(1e8)) < 1e-7


@pytest.mark.parametrize("a", [0.5, 3.0, 50.0])
def test_si_reflection(a):
    assert abs(sine_integral(a) + sine_integral(-a) + math.pi) <= 1e-12


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e4, 1e4))
def test_si_reflection_property(a):
    assert abs(sine_integral(a) + sine_integral(-a) + math.pi) <= 1e-12


@pytest.mark.parametrize("a", [1e-6, 1e-2, 0.7, 3.9, 4.0, 4.1, 17.0, 200.0, 5e3])
def test_si_ci_against_mpmath(a):
    si, ci = sici(a)
    assert abs(si - float(mpmath.si(a) - mpmath.pi / 2)) <= 1e-12
    assert abs(ci - float(mpmath.ci(a))) <= 1e-12
    assert cosine_integral(a) == ci
    assert sine_integral(a) == si


def test_ci_log_limit():
    a = 1e-6
    assert abs(cosine_integral(a) - math.log(a) - EULER_GAMMA) <= 1e-6


def test_ci_large_argument():
    a = 200.0
    assert abs(cosine_integral(a) - (math.sin(a) / a - math.cos(a) / a**2)) <= 1e-4


@pytest.mark.parametrize("a", [50.0, 80.0, 333.0, 1000.0])
def test_si_ci_remainder_ordering(a):
    si, ci = sici(a)
    assert abs(si + math.cos(a) / a + math.sin(a) / a**2) <= 2 / a**3
    assert abs(ci - math.sin(a) / a + math.cos(a) / a**2) <= 2 / a**3


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_ci_domain(a):
    with pytest.raises(DomainError):
        cosine_integral(a)


# ---- erf ---------------------------------------------------------------------


def test_erf_spot_values():
    assert erf_complex(0.0) == 0
    assert abs(erf_complex(1.0) - 0.842700792949715) < 1e-14
    assert abs(erf_complex(1.0) - erf_maclaurin(1.0)) < 1e-14


@pytest.mark.parametrize(
    "z", [0.3 + 0.2j, 1 + 1j, 2.4 - 0.5j, 2.6 + 0.1j, 4 + 3j, -6 + 5j, 25 - 29j, 20 - 25j, 0.01j, 25 + 0.5j, -1e3 + 2j]
)
def test_erf_against_mpmath(z):
    ref = complex(mpmath.erf(mpmath.mpc(z.real, z.imag)))
    assert abs(erf_complex(z) - ref) <= 1e-10 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_erf_odd(x, y):
    z = complex(x, y)
    if y * y - x * x > 600:
        return
    assert abs(erf_complex(-z) + erf_complex(z)) <= 1e-12 * max(1.0, abs(erf_complex(z)))


def test_erf_window():
    with pytest.raises(DomainError):
        erf_complex(1 + 31j)
