"""Parameter records for the qubit, the probe drive and the incident pulse.

Everything is stored in angular units (rad/s) and SI lengths; conversion
from ``Hz``-style inputs happens once, in :mod:`qubit_scatter.config`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

TWO_PI = 2.0 * math.pi


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


@dataclass(frozen=True)
class SystemParams:
    """Qubit in an open waveguide.

    Attributes
    ----------
    omega_q : qubit angular frequency Omega (rad/s)
    gamma_rad : radiative decay rate into the waveguide Gamma (rad/s)
    gamma_phi : pure dephasing rate (rad/s)
    gamma_loss : non-radiative loss rate (rad/s)
    v_g : group velocity (m/s)
    """

    omega_q: float
    gamma_rad: float
    gamma_phi: float = 0.0
    gamma_loss: float = 0.0
    v_g: float = 3.0e8

    def __post_init__(self):
        for name in ("omega_q", "gamma_rad", "gamma_phi", "gamma_loss", "v_g"):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")
        _require(self.omega_q > 0, "omega_q > 0 required")
        _require(self.gamma_rad > 0, "gamma_rad > 0 required (Gamma > 0)")
        _require(self.gamma_phi >= 0, "gamma_phi >= 0 required")
        _require(self.gamma_loss >= 0, "gamma_loss >= 0 required")
        _require(self.v_g > 0, "v_g > 0 required")

    @property
    def gamma_total(self) -> float:
        """Total decoherence rate Gamma/2 + Gamma_phi + Gamma_l/2."""
        return 0.5 * self.gamma_rad + self.gamma_phi + 0.5 * self.gamma_loss

    @property
    def omega_tilde(self) -> complex:
        """Complex qubit frequency Omega - i Gamma/2 (lossless)."""
        return complex(self.omega_q, -0.5 * self.gamma_rad)

    @property
    def wavelength(self) -> float:
        """Wavelength at the qubit frequency, 2 pi v_g / Omega (m)."""
        return TWO_PI * self.v_g / self.omega_q

    def qubit_frequency(self, lossy: bool = False) -> complex:
        """Omega, or Omega - i(Gamma_phi + Gamma_l/2) when ``lossy``."""
        if not lossy:
            return complex(self.omega_q)
        return complex(self.omega_q, -(self.gamma_phi + 0.5 * self.gamma_loss))


@dataclass(frozen=True)
class DriveSpec:
    """Continuous probe: angular frequency and Rabi frequency (rad/s)."""

    omega_s: float
    rabi: float = 0.0

    def __post_init__(self):
        _require(self.omega_s > 0, "omega_s > 0 required")
        _require(self.rabi >= 0, "rabi >= 0 required")


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian single-photon packet.

    Attributes
    ----------
    omega_s : carrier angular frequency (rad/s)
    delta : spectral width (rad/s)
    length : quantization length L (m); a bookkeeping constant that drops
        out of every field normalised by the incident amplitude
    """

    omega_s: float
    delta: float
    length: float = 1.0

    def __post_init__(self):
        _require(self.omega_s > 0, "omega_s > 0 required")
        _require(self.delta > 0, "delta > 0 required")
        _require(self.length > 0, "length > 0 required")

    def k_s(self, v_g: float) -> float:
        return self.omega_s / v_g

    def delta_k(self, v_g: float) -> float:
        return self.delta / v_g

    def amplitude(self, v_g: float) -> float:
        """Incident plane-wave amplitude A = (8/pi)^(1/4) sqrt(delta L / v_g)."""
        return (8.0 / math.pi) ** 0.25 * math.sqrt(self.delta * self.length / v_g)

    def is_narrow(self, params: SystemParams, ratio: float = 1e-3) -> bool:
        """Narrow carrier (delta/omega_s) and weak probe (delta/Gamma) flags."""
        return self.delta <= ratio * self.omega_s and self.delta <= ratio * params.gamma_rad
