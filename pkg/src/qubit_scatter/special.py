"""Special functions needed by the closed-form field kernels.

All routines accept scalars or numpy arrays and return the same shape
(a Python ``complex``/``float`` for scalar input).  They are pure functions
of their arguments.

Conventions
-----------
``exp_integral_e1``
    principal branch of E1(z) = int_1^inf exp(-z t)/t dt, cut on the closed
    negative real axis.
``sine_integral``
    si(a) = -int_a^inf sin(u)/u du = Si(a) - pi/2.
``cosine_integral``
    ci(a) = -int_a^inf cos(u)/u du = Ci(a), defined for a > 0 only.

Both trigonometric integrals are read off E1 on the imaginary axis,
E1(i a) = -Ci(a) + i si(a) for a > 0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061

# Series below this radius, continued fraction above it.
E1_SWITCH_RADIUS = 4.0
# Near the cut the continued fraction converges slowly; the series has no
# cancellation there, so it is used out to this radius instead.
_E1_CUT_SERIES_RADIUS = 40.0
_E1_SERIES_TERMS = 160
_CF_MAX_ITER = 20000
_CF_EPS = 1e-16

ERF_IM_WINDOW = 30.0
_ERF_SERIES_RADIUS = 2.5
# exp(-z^2) must stay representable; |erf| ~ exp(Im(z)^2 - Re(z)^2).
_ERF_EXP_LIMIT = 700.0


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _unwrap(arr, scalar, kind=complex):
    if scalar:
        return kind(arr.reshape(()))
    return arr


def _check_e1_domain(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("E1 argument must be finite")
    on_cut = (z.imag == 0.0) & (z.real <= 0.0)
    if np.any(on_cut):
        bad = z[on_cut].ravel()[0]
        raise DomainError(f"E1 undefined at {bad!r} (zero or negative real axis)")


def _e1_series(z: np.ndarray) -> np.ndarray:
    # E1(z) = -gamma - log z - sum_{n>=1} (-z)^n / (n n!)
    term = np.ones_like(z)
    acc = np.zeros_like(z)
    for n in range(1, _E1_SERIES_TERMS + 1):
        term = term * (-z) / n
        acc = acc + term / n
        if n > 8 and np.all(np.abs(term / n) <= 1e-17 * np.maximum(np.abs(acc), 1e-300)):
            break
    return -EULER_GAMMA - np.log(z) - acc


def _e1_scaled_cf(z: np.ndarray) -> np.ndarray:
    """exp(z) E1(z) by modified Lentz evaluation of the even continued fraction."""
    tiny = 1e-300
    b = z + 1.0
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, _CF_MAX_ITER + 1):
        an = -float(i * i)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _CF_EPS
        if not active.any():
            return h
    raise ConvergenceError("E1 continued fraction did not converge")


def _e1_parts(z: np.ndarray) -> np.ndarray:
    """Mask of arguments evaluated by the power series."""
    r = np.abs(z)
    near_cut = (z.real < 0.0) & (np.abs(z.imag) < 0.5 * r) & (r < _E1_CUT_SERIES_RADIUS)
    series_mask = (r < E1_SWITCH_RADIUS) | near_cut
    return series_mask


def exp_integral_e1(z):
    """Principal-branch exponential integral E1(z).

    Raises
    ------
    DomainError
        If any argument is zero, non-finite, or on the negative real axis.
    """
    arr, scalar = _as_complex_array(z)
    _check_e1_domain(arr)
    out = np.empty_like(arr)
    series = _e1_parts(arr)
    if series.any():
        out[series] = _e1_series(arr[series])
    cf = ~series
    if cf.any():
        zc = arr[cf]
        with np.errstate(over="ignore", invalid="ignore"):
            out[cf] = _e1_scaled_cf(zc) * np.exp(-zc)
    if not np.all(np.isfinite(out)):
        raise DomainError("E1 overflows double precision for this argument")
    return _unwrap(out, scalar)


def exp_e1_scaled(z):
    """exp(z) E1(z), evaluated without overflow for large |z|.

    This is the combination that appears in every closed-form kernel, e.g.
    int_0^inf exp(-a s)/(s + b) ds = exp(a b) E1(a b).
    """
    arr, scalar = _as_complex_array(z)
    _check_e1_domain(arr)
    out = np.empty_like(arr)
    series = _e1_parts(arr)
    if series.any():
        zs = arr[series]
        with np.errstate(over="ignore", invalid="ignore"):
            out[series] = np.exp(zs) * _e1_series(zs)
    cf = ~series
    if cf.any():
        out[cf] = _e1_scaled_cf(arr[cf])
    if not np.all(np.isfinite(out)):
        raise DomainError("exp(z) E1(z) not representable for this argument")
    return _unwrap(out, scalar)


def _positive_real(a, name):
    arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} argument must be finite")
    return arr, arr.ndim == 0


def sine_integral(a):
    """si(a) = Si(a) - pi/2 for any real a."""
    arr, scalar = _positive_real(a, "si")
    out = np.full(arr.shape, -0.5 * math.pi)
    mag = np.abs(arr)
    nz = mag > 0.0
    if nz.any():
        si_pos = exp_integral_e1(1j * mag[nz]).imag
        # si(-a) = -si(a) - pi
        out[nz] = np.where(arr[nz] > 0.0, si_pos, -si_pos - math.pi)
    return _unwrap(out, scalar, float)


def cosine_integral(a):
    """ci(a) = Ci(a) for a > 0.

    The logarithmic singularity at the origin is not continued to negative
    arguments; callers fold signs themselves (ci is even in its argument
    for the integrals that occur here).
    """
    arr, scalar = _positive_real(a, "ci")
    if np.any(arr <= 0.0):
        raise DomainError("ci requires a strictly positive argument")
    out = -exp_integral_e1(1j * arr).real
    return _unwrap(np.asarray(out, dtype=float), scalar, float)


def sici(a):
    """Return ``(si(a), ci(a))`` for a > 0 from a single E1 evaluation."""
    arr, scalar = _positive_real(a, "sici")
    if np.any(arr <= 0.0):
        raise DomainError("sici requires a strictly positive argument")
    e1 = np.asarray(exp_integral_e1(1j * arr))
    si = e1.imag
    ci = -e1.real
    if scalar:
        return float(si), float(ci)
    return si, ci


# ---------------------------------------------------------------------------
# complex error function


def _weideman_coefficients(n: int) -> tuple[np.ndarray, float]:
    m = 2 * n
    m2 = 2 * m
    k = np.arange(-m + 1, m)
    ell = math.sqrt(n / math.sqrt(2.0))
    theta = k * math.pi / m
    t = ell * np.tan(theta / 2.0)
    f = np.exp(-t * t) * (ell * ell + t * t)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / m2
    return a[1 : n + 1][::-1].copy(), ell


_W_COEFFS, _W_L = _weideman_coefficients(48)


def _faddeeva_upper(z: np.ndarray) -> np.ndarray:
    """w(z) = exp(-z^2) erfc(-i z) for Im z >= 0 (Weideman rational expansion)."""
    denom = _W_L - 1j * z
    zz = (_W_L + 1j * z) / denom
    p = np.zeros_like(z)
    for coef in _W_COEFFS:
        p = p * zz + coef
    return 2.0 * p / (denom * denom) + (1.0 / math.sqrt(math.pi)) / denom


def _erf_series(z: np.ndarray) -> np.ndarray:
    z2 = z * z
    term = z.copy()
    acc = z.copy()
    for n in range(1, 200):
        term = term * (-z2) / n
        contrib = term / (2 * n + 1)
        acc = acc + contrib
        if np.all(np.abs(contrib) <= 1e-17 * np.maximum(np.abs(acc), 1e-300)):
            break
    return (2.0 / math.sqrt(math.pi)) * acc


def erf_complex(z):
    """Error function of a complex argument inside ``|Im z| <= 30``.

    Raises
    ------
    DomainError
        Outside the window, or where the result is not representable in
        double precision.
    """
    arr, scalar = _as_complex_array(z)
    if not np.all(np.isfinite(arr)):
        raise DomainError("erf argument must be finite")
    if np.any(np.abs(arr.imag) > ERF_IM_WINDOW):
        raise DomainError(f"erf_complex supports |Im z| <= {ERF_IM_WINDOW}")
    if np.any(arr.imag**2 - arr.real**2 > _ERF_EXP_LIMIT):
        raise DomainError("erf_complex result overflows double precision")
    out = np.empty_like(arr)
    small = np.abs(arr) < _ERF_SERIES_RADIUS
    if small.any():
        out[small] = _erf_series(arr[small])
    big = ~small
    if big.any():
        zb = arr[big]
        flip = zb.real < 0.0
        zr = np.where(flip, -zb, zb)
        # erfc(z) = exp(-z^2) w(i z), and Im(i z) = Re z >= 0
        erfc = np.exp(-zr * zr) * _faddeeva_upper(1j * zr)
        val = 1.0 - erfc
        out[big] = np.where(flip, -val, val)
    return _unwrap(out, scalar)
