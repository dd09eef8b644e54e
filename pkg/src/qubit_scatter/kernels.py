"""Closed-form space-time kernels of the scattered field.

Geometry: the qubit sits at x = 0.  The forward (transmitted) field lives
at 0 < x < v_g t, the backward (reflected) field at -v_g t < x < 0.  In both
cases the kernels depend only on

    tau = |x| / v_g        travel time from the qubit to the observer
    s   = t - |x| / v_g    time elapsed since the wavefront passed

which is why I1(x, t) == J1(-x, t) and I2(x, t) == J2(-x, t).

The exp(z) E1(z) products are evaluated through :func:`exp_e1_scaled` so
that neither factor overflows at large times.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PreconditionError
from .params import SystemParams
from .special import exp_e1_scaled, sici

TWO_PI = 2.0 * math.pi

# Smallest admissible |x| and |x -/+ v_g t|, in units of the qubit wavelength.
MIN_DISTANCE_WAVELENGTHS = 1e-6

# Sign of the imaginary unit in the E1 argument of the first I1/J1 term.
# +1 is the variant that reproduces direct quadrature of the defining
# integral (frozen in tests/test_kernels.py); -1 is kept only so the
# validation suite can demonstrate that it catches the flip.
FIRST_TERM_E1_SIGN = 1


def _guard(params: SystemParams) -> float:
    return MIN_DISTANCE_WAVELENGTHS * params.wavelength / params.v_g


def causal_coordinates(x, t, params: SystemParams, direction: str):
    """Validate the causal region and return (tau, s) arrays.

    Raises
    ------
    DomainError
        On the qubit (x = 0) or on the wavefront, where the kernels diverge.
    PreconditionError
        Outside the causal region of the requested direction.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if direction == "forward":
        if np.any(x < 0):
            raise PreconditionError("forward field requires x > 0")
    elif direction == "backward":
        if np.any(x > 0):
            raise PreconditionError("backward field requires x < 0")
    else:
        raise ValueError(f"unknown direction {direction!r}")
    tau = np.abs(x) / params.v_g
    s = t - tau
    guard = _guard(params)
    if np.any(tau < guard):
        raise DomainError("field point too close to the qubit (x = 0)")
    if np.any(s < -guard):
        raise PreconditionError("field point outside the causal region (|x| > v_g t)")
    if np.any(s < guard):
        raise DomainError("field point on the wavefront (|x| = v_g t)")
    return tau, s


def _omega_tilde(params: SystemParams, lossy: bool) -> complex:
    return params.qubit_frequency(lossy) - 0.5j * params.gamma_rad


def _i1_core(tau, s, t, omega_tilde):
    """Pieces of I1: (first E1 term, 2 pi i pole term, front E1 term)."""
    first = np.exp(-1j * omega_tilde * t) * exp_e1_scaled(FIRST_TERM_E1_SIGN * 1j * tau * omega_tilde)
    pole = 2j * math.pi * np.exp(-1j * omega_tilde * s)
    front = exp_e1_scaled(-1j * s * omega_tilde)
    return first, pole, front


def _i2_bracket(tau, s, omega_s):
    """Bracket of I2 without the 2 pi: (i ci(a) + si(a)) + (-i ci(b) + si(b))."""
    si_a, ci_a = sici(omega_s * tau)
    si_b, ci_b = sici(omega_s * s)
    near = 1j * np.asarray(ci_a) + si_a
    front = -1j * np.asarray(ci_b) + si_b
    return near, front


def _complex_out(v):
    v = np.asarray(v)
    return complex(v) if v.ndim == 0 else v


def kernel_i1(x, t, params: SystemParams, lossy: bool = False):
    """Forward damped kernel I1(x, t) = int_0^inf I1(w, t) exp(i w (x - v_g t)/v_g) dw."""
    tau, s = causal_coordinates(x, t, params, "forward")
    first, pole, front = _i1_core(tau, s, np.asarray(t, dtype=float), _omega_tilde(params, lossy))
    return _complex_out(first + pole - front)


def kernel_i2(x, t, params: SystemParams, omega_s: float):
    """Forward coherent kernel I2(x, t) = int_0^inf I2(w, t) exp(i w (x - v_g t)/v_g) dw."""
    tau, s = causal_coordinates(x, t, params, "forward")
    near, front = _i2_bracket(tau, s, omega_s)
    return _complex_out(np.exp(-1j * omega_s * s) * (TWO_PI + near + front))


def kernel_j1(x, t, params: SystemParams, lossy: bool = False):
    """Backward damped kernel J1(x, t), x < 0 < x + v_g t."""
    tau, s = causal_coordinates(x, t, params, "backward")
    first, pole, front = _i1_core(tau, s, np.asarray(t, dtype=float), _omega_tilde(params, lossy))
    return _complex_out(first + pole - front)


def kernel_j2(x, t, params: SystemParams, omega_s: float):
    """Backward coherent kernel J2(x, t), x < 0 < x + v_g t."""
    tau, s = causal_coordinates(x, t, params, "backward")
    near, front = _i2_bracket(tau, s, omega_s)
    return _complex_out(np.exp(-1j * omega_s * s) * (TWO_PI + near + front))


def require_large_time(t, params: SystemParams, threshold: float = 10.0) -> None:
    if np.any(params.gamma_rad * np.asarray(t, dtype=float) < threshold):
        raise PreconditionError(f"large-time form needs Gamma t >= {threshold}")


def skip_reason(x: float, t: float, params: SystemParams, direction: str) -> str | None:
    """Machine-readable reason a point cannot be evaluated, or None.

    ``causality`` for points outside the causal region of ``direction``,
    ``singularity`` for points inside the guard band around x = 0 or the
    wavefront.
    """
    try:
        causal_coordinates(x, t, params, direction)
    except PreconditionError:
        return "causality"
    except DomainError:
        return "singularity"
    return None
