"""Plane-wave transmission and reflection amplitudes.

Frequencies may be scalars or numpy arrays; the result has the same shape.
"""

from __future__ import annotations

import numpy as np

from .params import DriveSpec, SystemParams


def _out(value):
    arr = np.asarray(value)
    return complex(arr) if arr.ndim == 0 else arr


def effective_omega(params: SystemParams) -> complex:
    """Qubit frequency with dephasing and intrinsic loss folded in.

    Returns Omega - i(Gamma_phi + Gamma_l/2).  Substituting it for Omega in
    the lossless amplitudes gives the weak-probe lossy amplitudes.
    """
    return params.qubit_frequency(lossy=True)


def reflection(params: SystemParams, omega_s, lossy: bool = False):
    """R = -i(Gamma/2) / (omega_s - Omega + i Gamma/2)."""
    omega = params.qubit_frequency(lossy)
    half = 0.5 * params.gamma_rad
    return _out(-1j * half / (np.asarray(omega_s) - omega + 1j * half))


def transmission(params: SystemParams, omega_s, lossy: bool = False):
    """T = (omega_s - Omega) / (omega_s - Omega + i Gamma/2) = 1 + R."""
    omega = params.qubit_frequency(lossy)
    detuning = np.asarray(omega_s) - omega
    return _out(detuning / (detuning + 1j * 0.5 * params.gamma_rad))


def _saturation(params: SystemParams, drive: DriveSpec):
    gamma = params.gamma_total
    x = (drive.omega_s - params.omega_q) / gamma
    sat = drive.rabi**2 / ((params.gamma_rad + params.gamma_loss) * gamma)
    return gamma, x, sat


def reflection_driven(params: SystemParams, drive: DriveSpec) -> complex:
    """Reflection with dephasing, intrinsic loss and probe saturation.

    R = -(Gamma / 2 gamma) (1 + i dw/gamma) / (1 + (dw/gamma)^2 + Omega_R^2 / ((Gamma + Gamma_l) gamma))
    """
    gamma, x, sat = _saturation(params, drive)
    return complex(-(params.gamma_rad / (2.0 * gamma)) * (1.0 + 1j * x) / (1.0 + x * x + sat))


def transmission_driven(params: SystemParams, drive: DriveSpec) -> complex:
    """T = 1 + R for the driven, lossy emitter."""
    gamma, x, sat = _saturation(params, drive)
    num = 1.0 + x * x - (params.gamma_rad / (2.0 * gamma)) * (1.0 + 1j * x) + sat
    return complex(num / (1.0 + x * x + sat))
