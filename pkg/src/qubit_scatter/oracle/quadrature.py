"""Brute-force quadrature of the kernel-defining frequency integrals.

Each kernel is K(x, t) = int_0^inf K(w, t) exp(-i w s) dw with s = t - |x|/v_g
and K(w, t) the spectral factor (I1 or I2 of the qubit dynamics).  The
integral is split at a core frequency ``w_c`` beyond every singular
feature:

* on [0, w_c] the spectral factor is integrated as written, on Gauss-Legendre
  panels graded geometrically towards the pole (I1) or the removable point
  (I2) and never longer than half an oscillation period;
* on [w_c, inf) the integrand separates into two pure phases
  c e^{i a w} / (w - p); each is integrated panel-wise and its partial
  integrals F(W) are averaged over ``periods_avg`` whole periods 2 pi/|a| of
  the upper limit, which cancels the O(1/W) oscillating remainder.

No special function is used anywhere, so the result is independent of the
closed forms it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ..errors import ConvergenceError, PreconditionError
from ..kernels import causal_coordinates
from ..params import SystemParams

KERNELS = ("I1", "I2", "J1", "J2")


@dataclass(frozen=True)
class QuadratureConfig:
    """Accuracy knobs of :func:`quadrature_kernel`.

    ``omega_max`` is a floor on the core/tail split frequency; the tails are
    always carried out far enough that |a| W reaches ``phase_span``.
    """

    omega_max: float | None = None
    periods_avg: int = 8
    panel_points: int = 16
    phase_span: float = 4000.0
    accuracy: float = 1e-4

    def validate(self, params: SystemParams) -> None:
        if self.omega_max is not None and self.omega_max < params.omega_q + 1e3 * params.gamma_rad:
            raise PreconditionError("omega_max must be at least Omega + 1e3 Gamma")
        if self.periods_avg < 8 or self.periods_avg % 2:
            raise PreconditionError("periods_avg must be even and >= 8")
        if self.panel_points < 16:
            raise PreconditionError("panel_points must be >= 16")

    def refined(self) -> "QuadratureConfig":
        return replace(
            self,
            omega_max=None if self.omega_max is None else 2.0 * self.omega_max,
            periods_avg=2 * self.periods_avg,
            panel_points=2 * self.panel_points,
            phase_span=2.0 * self.phase_span,
        )


@lru_cache(maxsize=16)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel_rule(edges: np.ndarray, n: int):
    x, w = _gauss(n)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes, weights


def _split_long(edges: np.ndarray, max_len: float) -> np.ndarray:
    out = [edges[:1]]
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((b - a) / max_len)))
        out.append(np.linspace(a, b, k + 1)[1:])
    return np.concatenate(out)


def _graded_edges(lo: float, hi: float, centre: float, width: float, max_len: float) -> np.ndarray:
    """Panel edges on [lo, hi], geometric around ``centre`` from ``width`` upwards."""
    pts = {lo, hi}
    if lo < centre < hi:
        pts.add(centre)
    d = width
    while d < max(centre - lo, hi - centre):
        for p in (centre - d, centre + d):
            if lo < p < hi:
                pts.add(p)
        d *= 2.0
    edges = np.array(sorted(pts))
    return _split_long(edges, max_len)


def _spectral(which: str, w, t, omega_tilde, omega_s):
    if which == "1":
        d = w - omega_tilde
        return np.expm1(1j * d * t) / d
    u = (w - omega_s) * t
    small = np.abs(u) < 1e-6
    safe = np.where(small, 1.0, u)
    return np.where(small, t * (1.0 + 0.5j * u - u * u / 6.0), t * np.expm1(1j * safe) / (1j * safe))


def _tail(coef: complex, a: float, pole: complex, w_c: float, cfg: QuadratureConfig) -> complex:
    """Period-averaged int_{w_c}^inf coef e^{i a w} / (w - pole) dw."""
    period = 2.0 * math.pi / abs(a)
    w_end = max(w_c + cfg.periods_avg * period, cfg.phase_span / abs(a))
    n_periods = int(math.ceil((w_end - w_c) / period))
    w_end = w_c + n_periods * period
    w_avg = w_end - cfg.periods_avg * period
    # panels of half a period, refined geometrically near w_c if the pole is close
    width = max(abs(pole.imag), 1e-12 * abs(w_c))
    edges = _graded_edges(w_c, w_end, w_c, width, 0.5 * period)
    edges = np.union1d(edges, [w_avg])
    nodes, weights = _panel_rule(edges, cfg.panel_points)
    f = coef * np.exp(1j * a * nodes) / (nodes - pole)
    # mean of F(W) over W in [w_avg, w_end] == integral with a linear taper
    taper = np.where(nodes <= w_avg, 1.0, (w_end - nodes) / (w_end - w_avg))
    return complex(np.sum(weights * f * taper))


def _single(which, tau, s, t, params, omega_s, lossy, cfg):
    omega = params.qubit_frequency(lossy)
    omega_tilde = omega - 0.5j * params.gamma_rad
    gamma = params.gamma_rad
    kind = which[1]
    floor = cfg.omega_max if cfg.omega_max is not None else params.omega_q + 1e3 * gamma
    centre = omega_tilde.real if kind == "1" else omega_s
    w_c = max(floor, centre + 1e3 * gamma)
    osc = max(tau, s)
    max_len = 0.5 * (2.0 * math.pi / osc)
    if kind == "1":
        width = 0.125 * gamma
    else:
        width = max(0.125 * gamma, 0.1 / t)
    edges = _graded_edges(0.0, w_c, centre, width, max_len)
    # the panel length near the pole must not exceed the distance to it
    nodes, weights = _panel_rule(edges, cfg.panel_points)
    core = complex(np.sum(weights * _spectral(kind, nodes, t, omega_tilde, omega_s) * np.exp(-1j * nodes * s)))

    if kind == "1":
        pole = omega_tilde
        c_near, c_front = np.exp(-1j * omega_tilde * t), 1.0
    else:
        pole = complex(omega_s)
        c_near, c_front = np.exp(-1j * omega_s * t) / 1j, 1.0 / 1j
    tail = _tail(c_near, tau, pole, w_c, cfg) - _tail(c_front, -s, pole, w_c, cfg)
    return core + tail


def quadrature_kernel(
    which: str,
    x: float,
    t: float,
    params: SystemParams,
    omega_s: float | None = None,
    cfg: QuadratureConfig | None = None,
    lossy: bool = False,
) -> complex:
    """Evaluate I1, I2 (forward) or J1, J2 (backward) by direct quadrature.

    The value is accepted only if a refinement (doubled Gauss points,
    averaging periods and tail length) agrees within ``cfg.accuracy``.

    Raises
    ------
    ConvergenceError
        When the two refinement levels disagree.
    """
    if which not in KERNELS:
        raise ValueError(f"which must be one of {KERNELS}")
    if which[1] == "2" and omega_s is None:
        raise ValueError("I2/J2 need omega_s")
    cfg = cfg or QuadratureConfig()
    cfg.validate(params)
    direction = "forward" if which[0] == "I" else "backward"
    tau, s = causal_coordinates(x, t, params, direction)
    tau, s = float(tau), float(s)
    base = _single(which, tau, s, float(t), params, omega_s, lossy, cfg)
    fine = _single(which, tau, s, float(t), params, omega_s, lossy, cfg.refined())
    err = abs(fine - base) / max(abs(fine), 1e-300)
    if err > cfg.accuracy:
        raise ConvergenceError(f"{which} quadrature not converged (refinement change {err:.2e})")
    return fine
