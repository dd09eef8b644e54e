"""Discretised-mode Schrödinger integrator for the single-excitation sector.

The waveguide is replaced by ``n_modes`` forward and ``n_modes`` backward
modes on the uniform grid

    omega_j = Omega - window + j d_omega,  d_omega = 2 window / n_modes,

which fixes the quantization length L = 2 pi v_g / d_omega.  Every mode
couples to the qubit with the same g0 = sqrt(v_g Gamma / 2L).  In the
frame rotating at Omega the Hamiltonian is time independent:

    i d beta/dt = g0 sum_k (a_k + b_k)
    i d a_k/dt  = (omega_k - Omega) a_k + g0 beta     (same for b_k)

and the interaction-picture amplitudes are gamma_k = a_k e^{i(omega_k - Omega) t},
delta_k = b_k e^{i(omega_k - Omega) t}.  The system is stepped with classic
fixed-step RK4.

Because the packet is sampled on a grid whose spacing may exceed its width,
the sampled packet is renormalised to unit norm and all comparisons use
ratios to the oracle's own incident amplitude A_oracle = sum_k gamma_k(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..dynamics import coupling_g0, gaussian_packet_k, qubit_beta
from ..errors import ConvergenceError, PreconditionError
from ..params import PulseSpec, SystemParams


@dataclass(frozen=True)
class ModeSumConfig:
    """Discretisation of the mode continuum.

    Attributes
    ----------
    n_modes : modes per direction
    window : half-width of the frequency band around Omega (rad/s)
    dt : RK4 step (s)
    coupled : set False to switch the qubit off (free propagation check)
    enforce : set False to allow deliberately under-resolved runs
    check_dt : re-run at dt/2 and compare beta(t_end)
    """

    n_modes: int = 4000
    window: float = 50.0
    dt: float = 2.5e-4
    coupled: bool = True
    enforce: bool = True
    check_dt: bool = True
    dt_tolerance: float = 1e-6

    @property
    def spacing(self) -> float:
        return 2.0 * self.window / self.n_modes

    def length(self, params: SystemParams) -> float:
        """Quantization length implied by the mode spacing, 2 pi v_g / d_omega."""
        return 2.0 * math.pi * params.v_g / self.spacing

    def omegas(self, params: SystemParams) -> np.ndarray:
        lo = params.omega_q - self.window
        if lo <= 0:
            raise PreconditionError("window reaches zero frequency")
        return lo + self.spacing * np.arange(self.n_modes)

    def validate(self, params: SystemParams) -> None:
        if not self.enforce:
            return
        g = params.gamma_rad
        if self.spacing > g / 20.0:
            raise PreconditionError("mode spacing must be <= Gamma/20")
        if self.window < 50.0 * g:
            raise PreconditionError("window must be >= 50 Gamma")
        if g * self.dt > 1e-3:
            raise PreconditionError("Gamma dt must be <= 1e-3")


@dataclass
class Trajectory:
    """Sampled mode-sum run.

    ``gamma`` and ``delta`` are interaction-picture amplitudes with one row
    per sample time.
    """

    params: SystemParams
    cfg: ModeSumConfig
    omega_k: np.ndarray
    times: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    gamma0: np.ndarray
    norm_drift: float
    carrier: float = field(init=False)
    A_oracle: complex = field(init=False)

    def __post_init__(self):
        w = np.abs(self.gamma0) ** 2
        self.carrier = float(np.sum(w * self.omega_k) / np.sum(w))
        self.A_oracle = complex(np.sum(self.gamma0))

    def index(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise PreconditionError(f"trajectory has no sample at t = {t}")
        return i


def _rhs(state, detuning, g0, n):
    beta = state[0]
    a = state[1 : n + 1]
    b = state[n + 1 :]
    out = np.empty_like(state)
    out[0] = -1j * g0 * (a.sum() + b.sum())
    out[1 : n + 1] = -1j * (detuning * a + g0 * beta)
    out[n + 1 :] = -1j * (detuning * b + g0 * beta)
    return out


def _integrate(state, detuning, g0, dt, n_steps, sample_steps):
    n = detuning.size
    samples = {}
    if 0 in sample_steps:
        samples[0] = state.copy()
    for step in range(1, n_steps + 1):
        k1 = _rhs(state, detuning, g0, n)
        k2 = _rhs(state + 0.5 * dt * k1, detuning, g0, n)
        k3 = _rhs(state + 0.5 * dt * k2, detuning, g0, n)
        k4 = _rhs(state + dt * k3, detuning, g0, n)
        state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step in sample_steps:
            samples[step] = state.copy()
    return state, samples


def initial_packet(pulse: PulseSpec, params: SystemParams, cfg: ModeSumConfig) -> np.ndarray:
    """Gaussian packet sampled on the mode grid and renormalised to unit norm."""
    omegas = cfg.omegas(params)
    amp = gaussian_packet_k(pulse, omegas / params.v_g, params.v_g).astype(complex)
    norm = math.sqrt(float(np.sum(np.abs(amp) ** 2)))
    if norm == 0.0:
        raise PreconditionError("packet does not overlap the mode grid")
    return amp / norm


def mode_sum_simulate(
    pulse: PulseSpec, params: SystemParams, cfg: ModeSumConfig, t_end: float, sample_times=None
) -> Trajectory:
    """Integrate the coupled amplitude equations from beta(0) = 0.

    Parameters
    ----------
    sample_times : times at which the full state is stored; they are snapped
        to the step grid.  Defaults to every 1/Gamma up to ``t_end``.

    Raises
    ------
    ConvergenceError
        If a run at dt/2 moves beta(t_end) by more than ``cfg.dt_tolerance``.
    """
    cfg.validate(params)
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    omegas = cfg.omegas(params)
    detuning = omegas - params.omega_q
    n = omegas.size
    g0 = coupling_g0(params, cfg.length(params)) if cfg.coupled else 0.0
    gamma0 = initial_packet(pulse, params, cfg)

    n_steps = int(round(t_end / cfg.dt))
    if sample_times is None:
        sample_times = np.arange(0.0, t_end + 0.5 / params.gamma_rad, 1.0 / params.gamma_rad)
        sample_times = sample_times[sample_times <= t_end * (1 + 1e-12)]
    steps = sorted({int(round(t / cfg.dt)) for t in np.atleast_1d(sample_times)})
    if steps and steps[-1] > n_steps:
        raise PreconditionError("sample time beyond t_end")

    state0 = np.zeros(2 * n + 1, dtype=complex)
    state0[1 : n + 1] = gamma0
    final, samples = _integrate(state0, detuning, g0, cfg.dt, n_steps, set(steps) | {n_steps})
    norm_drift = abs(float(np.sum(np.abs(final) ** 2)) - 1.0)

    if cfg.check_dt:
        fine, _ = _integrate(state0, detuning, g0, 0.5 * cfg.dt, 2 * n_steps, set())
        change = abs(fine[0] - final[0])
        if change > cfg.dt_tolerance:
            raise ConvergenceError(f"halving dt moved beta(t_end) by {change:.2e}")

    times = np.array(steps, dtype=float) * cfg.dt
    rows = [samples[s] for s in steps]
    phase = np.exp(1j * np.outer(times, detuning))
    beta = np.array([r[0] for r in rows])
    gamma = np.array([r[1 : n + 1] for r in rows]) * phase
    delta = np.array([r[n + 1 :] for r in rows]) * phase
    return Trajectory(params, cfg, omegas, times, beta, gamma, delta, gamma0, norm_drift)


def reconstruct_field(traj: Trajectory, x: float, t: float, direction: str, scattered_only: bool = False) -> complex:
    """u(x, t) / A_oracle by direct summation over the modes.

    Forward: sum_k gamma_k(t) exp(i omega_k (x - v_g t)/v_g), x > 0.
    Backward: sum_k delta_k(t) exp(-i omega_k (x + v_g t)/v_g), x < 0.
    With the qubit switched off the forward sum is valid on both sides.
    """
    v = traj.params.v_g
    i = traj.index(t)
    t = traj.times[i]
    if direction == "forward":
        if x <= 0 and traj.cfg.coupled:
            raise PreconditionError("forward reconstruction needs x > 0")
        amp = traj.gamma[i] - traj.gamma0 if scattered_only else traj.gamma[i]
        phase = np.exp(1j * traj.omega_k * (x - v * t) / v)
    elif direction == "backward":
        if x >= 0:
            raise PreconditionError("backward reconstruction needs x < 0")
        amp = traj.delta[i]
        phase = np.exp(-1j * traj.omega_k * (x + v * t) / v)
    else:
        raise ValueError("direction must be 'forward' or 'backward'")
    return complex(np.sum(amp * phase) / traj.A_oracle)


def oracle_pulse(pulse: PulseSpec, traj: Trajectory) -> PulseSpec:
    """Pulse the closed forms should be compared against: the realised carrier and L."""
    return replace(pulse, omega_s=traj.carrier, length=traj.cfg.length(traj.params))


def wigner_weisskopf_residual(
    params: SystemParams,
    pulse: PulseSpec,
    t_grid,
    cfg: ModeSumConfig | None = None,
    traj: Trajectory | None = None,
) -> np.ndarray:
    """Markov-approximation error of the closed-form qubit amplitude.

    Returns |beta_ms/A_oracle - beta_closed/A| / max|beta_closed/A| on
    ``t_grid``.  Normalising by the incident amplitude removes the packet
    normalisation convention from the comparison.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if traj is None:
        cfg = cfg or ModeSumConfig()
        traj = mode_sum_simulate(pulse, params, cfg, float(t_grid.max()), sample_times=t_grid)
    ref = oracle_pulse(pulse, traj)
    amp = ref.amplitude(params.v_g)
    closed = np.asarray(qubit_beta(ref, params, t_grid)) / amp
    idx = [traj.index(t) for t in t_grid]
    ms = traj.beta[idx] / traj.A_oracle
    scale = float(np.max(np.abs(closed)))
    if scale == 0.0:
        scale = 1.0
    return np.abs(ms - closed) / scale
