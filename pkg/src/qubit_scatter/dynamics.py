"""Incident Gaussian packet, qubit amplitude and scattered spectral amplitude.

Conventions follow the interaction picture: the qubit amplitude beta(t)
multiplies exp(-i Omega t)|e,0>, the photon amplitudes multiply
exp(-i omega_k t).  The coupling g_k is frozen at its on-resonance value
g0 = sqrt(v_g Gamma / 2L) everywhere (slowly varying over the linewidth).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import PulseSpec, SystemParams
from .special import erf_complex

HBAR = 1.054571817e-34  # J s
_I2_SERIES_THRESHOLD = 1e-6


def gaussian_packet_k(pulse: PulseSpec, k, v_g: float):
    """Initial forward amplitude gamma_k(0) of the Gaussian packet in k space.

    (8 pi / (L^2 dk^2))^(1/4) exp(-(k - k_S)^2 / dk^2), normalised so that
    (L / 2 pi) int |gamma_k(0)|^2 dk = 1.
    """
    dk = pulse.delta_k(v_g)
    peak = (8.0 * math.pi / (pulse.length**2 * dk**2)) ** 0.25
    val = peak * np.exp(-((np.asarray(k, dtype=float) - pulse.k_s(v_g)) ** 2) / dk**2)
    return float(val) if np.ndim(val) == 0 else val


def incident_packet(pulse: PulseSpec, x, t, v_g: float):
    """Free Gaussian packet u_inc(x, t)/A = exp(i omega_s T - (Delta T)^2/4), T = (x - v_g t)/v_g."""
    big_t = (np.asarray(x, dtype=float) - v_g * np.asarray(t, dtype=float)) / v_g
    val = np.exp(1j * pulse.omega_s * big_t - (pulse.delta * big_t) ** 2 / 4.0)
    return complex(val) if np.ndim(val) == 0 else val


def coupling_g0(params: SystemParams, length: float) -> float:
    """On-resonance qubit-mode coupling sqrt(v_g Gamma / 2L)."""
    if length <= 0:
        raise ValueError("length must be positive")
    return math.sqrt(params.v_g * params.gamma_rad / (2.0 * length))


def drive_prefactor(params: SystemParams, pulse: PulseSpec) -> float:
    """(2/pi)^(1/4) sqrt(Gamma Delta): strength of the narrow-pulse drive."""
    return (2.0 / math.pi) ** 0.25 * math.sqrt(params.gamma_rad * pulse.delta)


def c0_amplitude(params: SystemParams, pulse: PulseSpec, lossy: bool = False) -> complex:
    """Steady-state qubit amplitude C0 = -(2/pi)^(1/4) sqrt(Gamma Delta) / (omega_s - Omega + i Gamma/2)."""
    omega = params.qubit_frequency(lossy)
    return -drive_prefactor(params, pulse) / (pulse.omega_s - omega + 0.5j * params.gamma_rad)


@dataclass(frozen=True)
class DriveIntegral:
    """Both evaluations of int_0^inf gamma_0(w) exp(-i(w - Omega)t) dw."""

    exact: complex
    narrow: complex

    @property
    def difference(self) -> complex:
        return self.exact - self.narrow

    @property
    def relative_difference(self) -> float:
        return abs(self.difference) / abs(self.exact)


def drive_integral(pulse: PulseSpec, params: SystemParams, t: float) -> DriveIntegral:
    """Drive term of the qubit equation, exact (erf form) and narrow-pulse form."""
    if t < 0:
        raise ValueError("t must be non-negative")
    d, ws = pulse.delta, pulse.omega_s
    scale = math.sqrt(d / pulse.length)
    phase = np.exp(-1j * (ws - params.omega_q) * t)
    z = 1j * t * d / 2.0 - ws / d
    exact = (
        2.0**-0.25
        * math.pi**0.75
        * scale
        * math.exp(-(d * t) ** 2 / 4.0)
        * (1.0 - erf_complex(z))
        * phase
    )
    narrow = (2.0 * math.pi) ** 0.75 * scale * phase
    return DriveIntegral(complex(exact), complex(narrow))


def _check_narrow(pulse: PulseSpec, params: SystemParams) -> None:
    if not pulse.is_narrow(params):
        warnings.warn(
            "pulse is not narrow (delta/omega_s or delta/Gamma above 1e-3); "
            "closed forms assume a delta-like spectrum",
            RuntimeWarning,
            stacklevel=3,
        )


def qubit_beta(pulse: PulseSpec, params: SystemParams, t, lossy: bool = False):
    """Qubit amplitude beta(t) = C0 (exp(-Gamma t/2) - exp(-i(omega_s - Omega) t)).

    With ``lossy`` the complex frequency Omega - i(Gamma_phi + Gamma_l/2)
    replaces Omega throughout.
    """
    _check_narrow(pulse, params)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    omega = params.qubit_frequency(lossy)
    c0 = c0_amplitude(params, pulse, lossy)
    beta = c0 * (np.exp(-0.5 * params.gamma_rad * t) - np.exp(-1j * (pulse.omega_s - omega) * t))
    return complex(beta) if beta.ndim == 0 else beta


def _i1_spectral(omega, t, omega_tilde):
    w = omega - omega_tilde
    return (np.exp(1j * w * t) - 1.0) / w


def _i2_spectral(omega, t, omega_s):
    u = (omega - omega_s) * t
    small = np.abs(u) < _I2_SERIES_THRESHOLD
    safe = np.where(small, 1.0, u)
    exact = t * (np.exp(1j * safe) - 1.0) / (1j * safe)
    series = t * (1.0 + 0.5j * u - u * u / 6.0)
    return np.where(small, series, exact)


def spectral_amplitude(pulse: PulseSpec, params: SystemParams, omega, t, lossy: bool = False):
    """Scattered amplitude gamma_1(omega, t) = -g0 C0 [I1(omega,t) - i I2(omega,t)].

    The same function gives the backward amplitude delta_k(t).
    """
    omega = np.asarray(omega, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    omega_tilde = params.qubit_frequency(lossy) - 0.5j * params.gamma_rad
    g0 = coupling_g0(params, pulse.length)
    c0 = c0_amplitude(params, pulse, lossy)
    val = -g0 * c0 * (_i1_spectral(omega, t, omega_tilde) - 1j * _i2_spectral(omega, t, pulse.omega_s))
    return complex(val) if np.ndim(val) == 0 else val


def probe_power_estimate(pulse: PulseSpec, params: SystemParams) -> float:
    """Single-photon probe power hbar Omega Delta / 2 pi, in watts."""
    if pulse.delta > 1e-3 * params.gamma_rad:
        warnings.warn("probe is not in the weak-excitation regime (delta << Gamma)", RuntimeWarning, stacklevel=2)
    return HBAR * params.omega_q * pulse.delta / (2.0 * math.pi)
