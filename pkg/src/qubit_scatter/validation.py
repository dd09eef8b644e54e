"""Invariant suite behind ``qubit-scatter validate``.

Each check returns a :class:`Check` with the measured error and the
tolerance it was held to.  A :class:`ConvergenceError` inside a check
marks that check failed instead of aborting the run.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, PreconditionError
from .fields import backward_field, forward_field
from .oracle.modesum import ModeSumConfig, mode_sum_simulate, oracle_pulse, reconstruct_field, wigner_weisskopf_residual
from .oracle.quadrature import quadrature_kernel
from .params import PulseSpec, SystemParams
from .stationary import reflection, transmission


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def oracle_grid(params: SystemParams) -> list[tuple[float, float]]:
    """25 (|x|, t) points, |x| in [0.5, 60] mm and t in [0.3, 5] ns, all causal."""
    xs = np.geomspace(0.5e-3, 60e-3, 5)
    ts = np.geomspace(0.3e-9, 5e-9, 5)
    return [(float(x), float(t)) for x in xs for t in ts]


def kernel_oracle_error(which: str, params: SystemParams, omega_s: float, points) -> float:
    """Worst relative difference between a closed-form kernel and its quadrature."""
    closed = {"I1": kernels.kernel_i1, "J1": kernels.kernel_j1, "I2": kernels.kernel_i2, "J2": kernels.kernel_j2}[which]
    sign = 1.0 if which[0] == "I" else -1.0
    worst = 0.0
    for x, t in points:
        xs = sign * x
        if which[1] == "1":
            c = closed(xs, t, params)
            q = quadrature_kernel(which, xs, t, params)
        else:
            c = closed(xs, t, params, omega_s)
            q = quadrature_kernel(which, xs, t, params, omega_s)
        worst = max(worst, abs(c - q) / abs(q))
    return worst


def _guarded(name: str, tolerance: float, fn: Callable[[], float], detail: str = "") -> Check:
    try:
        measured = float(fn())
    except ConvergenceError as exc:
        return Check(name, math.inf, tolerance, False, f"convergence failure: {exc}")
    return Check(name, measured, tolerance, measured <= tolerance, detail)


def reference_params() -> SystemParams:
    return SystemParams(omega_q=2 * math.pi * 5e9, gamma_rad=2 * math.pi * 10e6)


def desk_params() -> SystemParams:
    return SystemParams(omega_q=200.0, gamma_rad=1.0, v_g=1.0)


MODE_SUM_PROBES = [(x, t) for t in (8.0, 10.0) for x in (1.0, 2.0, 3.0, 4.0, 6.0)]


def run_checks(params: SystemParams | None = None, include_mode_sum: bool = True) -> list[Check]:
    params = params or reference_params()
    checks: list[Check] = []
    g = params.gamma_rad

    checks.append(_guarded("resonant_extinction", 1e-12, lambda: abs(transmission(params, params.omega_q)) ** 2))

    def unitarity():
        w = params.omega_q + np.linspace(-50, 50, 10_000) * g
        return np.max(np.abs(np.abs(transmission(params, w)) ** 2 + np.abs(reflection(params, w)) ** 2 - 1.0))

    checks.append(_guarded("unitarity", 1e-12, unitarity))

    points = oracle_grid(params)
    omega_s = 0.97 * params.omega_q
    for which in ("I1", "I2", "J1", "J2"):
        checks.append(_guarded(f"oracle_{which}", 1e-4, lambda w=which: kernel_oracle_error(w, params, omega_s, points)))

    # mutation smoke test: the flipped E1 sign must be caught by the oracle
    saved = kernels.FIRST_TERM_E1_SIGN
    try:
        kernels.FIRST_TERM_E1_SIGN = -saved
        flipped = kernel_oracle_error("I1", params, omega_s, points[:5])
        checks.append(Check("mutation_detected", flipped, 1e-4, flipped > 1e-4, "flipped E1 sign must exceed tolerance"))
    except ConvergenceError as exc:
        checks.append(Check("mutation_detected", math.nan, 1e-4, False, f"convergence failure: {exc}"))
    finally:
        kernels.FIRST_TERM_E1_SIGN = saved

    def causality():
        pulse = PulseSpec(params.omega_q, 1e-3 * g)
        bad = 0
        for fn, x in ((forward_field, -1e-3), (forward_field, 10.0), (backward_field, 1e-3), (backward_field, -10.0)):
            try:
                fn(x, 1e-9, params, pulse)
                bad += 1
            except (PreconditionError, DomainError):
                pass
        return bad

    checks.append(_guarded("causality_enforced", 0.0, causality))

    def l_independence():
        vals = [forward_field(0.02, 2e-9, params, PulseSpec(1.01 * params.omega_q, 1e-3 * g, L)).u_over_A for L in (0.5, 1.0, 2.0)]
        return max(abs(v - vals[0]) for v in vals)

    checks.append(_guarded("length_independence", 1e-12, l_independence))

    def recovery():
        lam = params.wavelength
        t = 50.0 / g
        worst = 0.0
        for d in np.linspace(-5, 5, 50):
            pulse = PulseSpec(params.omega_q + d * g, 1e-3 * g)
            phi_f = np.exp(-1j * pulse.omega_s * (t - 50 * lam / params.v_g))
            f = forward_field(50 * lam, t, params, pulse).u_over_A
            b = backward_field(-50 * lam, t, params, pulse).u_over_A
            worst = max(worst, abs(f - transmission(params, pulse.omega_s) * phi_f), abs(b - reflection(params, pulse.omega_s) * phi_f))
        return worst

    checks.append(_guarded("stationary_recovery", 1e-2, recovery))

    if include_mode_sum:
        checks.extend(mode_sum_checks())
    return checks


def mode_sum_checks(cfg: ModeSumConfig | None = None) -> list[Check]:
    params = desk_params()
    pulse = PulseSpec(params.omega_q + params.gamma_rad, 1e-3 * params.gamma_rad)
    cfg = cfg or ModeSumConfig()
    times = np.arange(0.0, 10.0 + 1e-9, 0.5)
    try:
        traj = mode_sum_simulate(pulse, params, cfg, 10.0, sample_times=times)
    except ConvergenceError as exc:
        return [Check("mode_sum", math.inf, 1e-6, False, f"convergence failure: {exc}")]
    out = [Check("mode_sum_norm_drift", traj.norm_drift, 1e-7, traj.norm_drift <= 1e-7, "t_end = 10/Gamma")]
    resid = wigner_weisskopf_residual(params, pulse, times, traj=traj)
    out.append(Check("mode_sum_beta", float(resid.max()), 1e-2, float(resid.max()) <= 1e-2))
    ref = oracle_pulse(pulse, traj)
    worst = 0.0
    for x, t in MODE_SUM_PROBES:
        worst = max(
            worst,
            abs(reconstruct_field(traj, x, t, "forward") - forward_field(x, t, params, ref).u_over_A),
            abs(reconstruct_field(traj, -x, t, "backward") - backward_field(-x, t, params, ref).u_over_A),
        )
    out.append(Check("mode_sum_field", worst, 2e-2, worst <= 2e-2, f"{len(MODE_SUM_PROBES)} probes per direction"))
    return out
