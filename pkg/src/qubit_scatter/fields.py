"""Scattered fields built from the closed-form kernels.

All fields are normalised by the incident plane-wave amplitude A, which
makes them independent of the quantization length L.  With
e^{i phi} = exp(-i omega_s s) (the carrier phase at the observation point,
s = t - |x|/v_g) the two fields read

    forward   u/A = T e^{i phi} + (i R / 2 pi) D + (R / 2 pi) e^{i phi} C
    backward  u/A = R e^{i phi} + (i R / 2 pi) D + (R / 2 pi) e^{i phi} C

where D is the damped kernel I1 (or J1) and C is the coherent bracket of I2
(or J2) without its 2 pi.  The three terms are reported separately as
``stationary``, ``damping`` and ``coherent``.  The 2 pi of the coherent
kernel has been folded into the stationary term (it turns the incident
wave into T e^{i phi}); the 2 pi i pole term of D carries e^{-Gamma s/2} and
stays in the damping term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .kernels import TWO_PI, _i1_core, _i2_bracket, causal_coordinates, require_large_time
from .params import PulseSpec, SystemParams
from .special import sici
from .stationary import reflection, transmission

DIRECTIONS = ("forward", "backward")


def _scalar(v):
    v = np.asarray(v)
    if v.ndim == 0:
        return complex(v) if np.iscomplexobj(v) else float(v)
    return v


@dataclass(frozen=True)
class FieldSample:
    """Field u/A at (x, t) with its three-part decomposition.

    Scalars for a single point, numpy arrays for broadcast input.
    """

    x: object
    t: object
    stationary: object
    damping: object
    coherent: object

    @property
    def u_over_A(self):
        return _scalar(np.asarray(self.stationary) + self.damping + self.coherent)

    @property
    def intensity(self):
        return _scalar(np.abs(self.u_over_A) ** 2)


def _amplitudes(params: SystemParams, omega_s: float, lossy: bool):
    return transmission(params, omega_s, lossy), reflection(params, omega_s, lossy)


def _field(x, t, params, pulse, direction, lossy):
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    tau, s = causal_coordinates(x, t, params, direction)
    ws = pulse.omega_s
    t_amp, r_amp = _amplitudes(params, ws, lossy)
    omega_tilde = params.qubit_frequency(lossy) - 0.5j * params.gamma_rad
    carrier = np.exp(-1j * ws * s)
    first, pole, front = _i1_core(tau, s, t, omega_tilde)
    near, front2 = _i2_bracket(tau, s, ws)
    stat = (t_amp if direction == "forward" else r_amp) * carrier
    damping = 1j * r_amp / TWO_PI * (first + pole - front)
    coherent = r_amp / TWO_PI * carrier * (near + front2)
    return FieldSample(_scalar(x), _scalar(t), _scalar(stat), _scalar(damping), _scalar(coherent))


def forward_field(x, t, params: SystemParams, pulse: PulseSpec, lossy: bool = False) -> FieldSample:
    """Transmitted field behind the qubit, 0 < x < v_g t.

    Raises
    ------
    PreconditionError
        Outside the forward causal region.
    DomainError
        At x = 0 or on the wavefront x = v_g t.
    """
    return _field(x, t, params, pulse, "forward", lossy)


def backward_field(x, t, params: SystemParams, pulse: PulseSpec, lossy: bool = False) -> FieldSample:
    """Reflected field ahead of the qubit, -v_g t < x < 0."""
    return _field(x, t, params, pulse, "backward", lossy)


def field(x, t, params, pulse, direction: str, lossy: bool = False) -> FieldSample:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    return _field(x, t, params, pulse, direction, lossy)


def near_zone_term(x, params: SystemParams, omega_s: float):
    """z = (i ci(a) + si(a)) / 2 pi with a = omega_s |x| / v_g."""
    a = omega_s * np.abs(np.asarray(x, dtype=float)) / params.v_g
    if np.any(a <= 0):
        raise DomainError("x = 0 is singular for the near-zone term")
    si_a, ci_a = sici(a)
    return _scalar((1j * np.asarray(ci_a) + si_a) / TWO_PI)


def _large_time(x, t, params, pulse, direction, lossy, threshold):
    require_large_time(t, params, threshold)
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    _, s = causal_coordinates(x, t, params, direction)
    t_amp, r_amp = _amplitudes(params, pulse.omega_s, lossy)
    z = near_zone_term(x, params, pulse.omega_s)
    carrier = np.exp(-1j * pulse.omega_s * s)
    lead = t_amp if direction == "forward" else r_amp
    return _scalar(carrier * (lead + r_amp * z)), z


def forward_field_large_time(x, params, pulse, t, lossy: bool = False, threshold: float = 10.0):
    """Forward field once every term carrying e^{-Gamma t/2} or 1/t has died out.

    u/A = (T + R z) e^{i phi}.  Requires Gamma t >= ``threshold``.
    """
    return _large_time(x, t, params, pulse, "forward", lossy, threshold)[0]


def backward_field_large_time(x, params, pulse, t, lossy: bool = False, threshold: float = 10.0):
    """Backward large-time field R (1 + z) e^{i phi}; returns (u/A, z)."""
    return _large_time(x, t, params, pulse, "backward", lossy, threshold)


def large_time_intensity(x, params: SystemParams, omega_s: float, direction: str, lossy: bool = False):
    """|u/A|^2 of the large-time field, |T + R z|^2 or |R|^2 |1 + z|^2; independent of t."""
    x = np.asarray(x, dtype=float)
    if direction == "forward" and np.any(x <= 0) or direction == "backward" and np.any(x >= 0):
        raise PreconditionError(f"x on the wrong side of the qubit for {direction}")
    t_amp, r_amp = _amplitudes(params, omega_s, lossy)
    lead = t_amp if direction == "forward" else r_amp
    return _scalar(np.abs(lead + r_amp * np.asarray(near_zone_term(x, params, omega_s))) ** 2)


@dataclass(frozen=True)
class InterferenceReport:
    """|u/A|^2 = R_sq (1 + 2 Re z + |z|^2) split into its pieces."""

    x: object
    R_sq: float
    z: object
    z_sq: object
    cross: object

    @property
    def intensity(self):
        return _scalar(self.R_sq * (1.0 + 2.0 * np.real(self.z)) + self.R_sq * self.z_sq)


def interference_report(x, params: SystemParams, pulse: PulseSpec, lossy: bool = False) -> InterferenceReport:
    """Reflected large-time intensity split into stationary, interference and near-zone parts."""
    x = np.asarray(x, dtype=float)
    if np.any(x >= 0):
        raise PreconditionError("interference report is for the backward region x < 0")
    r_sq = float(abs(reflection(params, pulse.omega_s, lossy)) ** 2)
    z = near_zone_term(x, params, pulse.omega_s)
    return InterferenceReport(_scalar(x), r_sq, z, _scalar(np.abs(z) ** 2), _scalar(2.0 * r_sq * np.real(z)))


def offres_intensity(x, params: SystemParams, pulse: PulseSpec, direction: str):
    """Off-resonant transmittance or reflectance at omega_s = Omega + Gamma/2.

    (1/2) |1 -/+ (1/2 pi)(i ci(alpha) + si(alpha))|^2, minus for the
    transmittance (x > 0) and plus for the reflectance (x < 0).
    """
    if abs(pulse.omega_s - params.omega_q - 0.5 * params.gamma_rad) > 1e-9 * params.gamma_rad + 1e-15 * params.omega_q:
        raise PreconditionError("off-resonant formulas need omega_s = Omega + Gamma/2")
    x = np.asarray(x, dtype=float)
    if direction == "forward":
        if np.any(x < 0):
            raise PreconditionError("transmittance needs x > 0")
        sign = -1.0
    elif direction == "backward":
        if np.any(x > 0):
            raise PreconditionError("reflectance needs x < 0")
        sign = 1.0
    else:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    z = near_zone_term(x, params, pulse.omega_s)
    return _scalar(0.5 * np.abs(1.0 + sign * np.asarray(z)) ** 2)


@dataclass(frozen=True)
class AsymptoticSample:
    value: complex
    correction_scale: float


def asymptotic_field(
    x, t, params: SystemParams, pulse: PulseSpec, direction: str, lossy: bool = False, threshold: float = 0.1
) -> AsymptoticSample:
    """Far-field form with every E1, si and ci replaced by its leading 1/z term.

    Valid when v_g/(|Omega~| |x|), v_g/(|Omega~| |x -/+ v_g t|), v_g/(omega_s |x|)
    and v_g/(omega_s |x -/+ v_g t|) are all at most ``threshold``.

    Raises
    ------
    PreconditionError
        When any of the four ratios exceeds ``threshold``.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    tau, s = causal_coordinates(float(x), float(t), params, direction)
    tau, s = float(tau), float(s)
    ws = pulse.omega_s
    omega_tilde = params.qubit_frequency(lossy) - 0.5j * params.gamma_rad
    ratios = (
        1.0 / (abs(omega_tilde) * tau),
        1.0 / (abs(omega_tilde) * s),
        1.0 / (ws * tau),
        1.0 / (ws * s),
    )
    if max(ratios) > threshold:
        raise PreconditionError(f"asymptotic regime not reached (largest ratio {max(ratios):.3g} > {threshold})")
    t_amp, r_amp = _amplitudes(params, ws, lossy)
    carrier = np.exp(-1j * ws * s)
    lead = t_amp if direction == "forward" else r_amp
    damped = (
        np.exp(-1j * omega_tilde * t) / (tau * omega_tilde)
        - TWO_PI * np.exp(-1j * omega_tilde * s)
        + 1.0 / (s * omega_tilde)
    )
    coherent = np.exp(-1j * ws * tau) / (ws * tau) + np.exp(1j * ws * s) / (ws * s)
    value = lead * carrier + r_amp / TWO_PI * damped - r_amp / TWO_PI * carrier * coherent
    return AsymptoticSample(complex(value), max(ratios[2], ratios[3]))


def timeseries_intensity(x0: float, t0: float, params: SystemParams, pulse: PulseSpec, t_grid, lossy: bool = False):
    """|u(x0, t)/A|^2 on ``t_grid``; forward for x0 > 0, backward for x0 < 0."""
    if abs(x0) < 1e-3:
        raise PreconditionError("|x0| >= 1 mm required")
    if abs(x0) - params.v_g * t0 >= 0:
        raise PreconditionError("t0 must satisfy |x0| - v_g t0 < 0")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < t0):
        raise PreconditionError("t_grid must start at or after t0")
    direction = "forward" if x0 > 0 else "backward"
    return np.abs(_field(np.full_like(t_grid, x0), t_grid, params, pulse, direction, lossy).u_over_A) ** 2


def stroboscopic_times(t_start: float, t_stop: float, omega_s: float, stride: int = 1) -> np.ndarray:
    """Times that are whole multiples of the carrier period 2 pi/omega_s.

    Sampling on this comb removes the sub-nanosecond carrier ripple from an
    intensity time series without touching the slow oscillation.
    """
    period = TWO_PI / omega_s
    n0 = math.ceil(t_start / period)
    n1 = math.floor(t_stop / period)
    return np.arange(n0, n1 + 1, stride) * period


@dataclass(frozen=True)
class OscillationFit:
    frequency: float | None
    extrema_times: np.ndarray
    periods: float


def fit_oscillation_frequency(t, y, min_periods: float = 2.0, rel_tol: float = 1e-9) -> OscillationFit:
    """Angular frequency from the spacing of local extrema of ``y``.

    Maxima and minima are both located by three-point quadratic
    interpolation; consecutive extrema are half a period apart.  Extrema
    whose excursion is below ``rel_tol`` times the signal scale are ignored.
    Returns ``frequency=None`` when the extrema span fewer than
    ``min_periods`` periods.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 5:
        raise ValueError("need at least 5 samples")
    dy = np.diff(y)
    scale = max(float(np.max(np.abs(y))), 1e-300)
    times = []
    for i in range(1, y.size - 1):
        left, right = dy[i - 1], dy[i]
        if left * right < 0 and min(abs(left), abs(right)) > rel_tol * scale * 1e-6:
            y0, y1, y2 = y[i - 1], y[i], y[i + 1]
            denom = y0 - 2.0 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            h = 0.5 * (t[i + 1] - t[i - 1])
            times.append(t[i] + shift * h)
    times = np.array(times)
    if times.size < 2:
        return OscillationFit(None, times, 0.0)
    periods = 0.5 * (times.size - 1)
    if periods < min_periods:
        return OscillationFit(None, times, periods)
    # least-squares slope of extremum time vs half-period index
    idx = np.arange(times.size)
    half_period = np.polyfit(idx, times, 1)[0]
    return OscillationFit(math.pi / half_period, times, periods)
