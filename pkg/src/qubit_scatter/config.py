"""Scenario files: flat ``key = value`` text with ``#`` comments.

Frequencies are given as ordinary frequencies in the unit named by the key
suffix (``omega_q_ghz = 5`` means Omega/2 pi = 5 GHz) and converted to
angular units here, once.  Lengths carry ``_mm`` or ``_m`` and times ``_ns``
or ``_ps`` suffixes.  Every key is optional; missing keys take the
defaults below, which reproduce the reference figure parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError
from .kernels import skip_reason
from .params import TWO_PI, PulseSpec, SystemParams

DEFAULTS: dict[str, float | int | str] = {
    "omega_q_ghz": 5.0,
    "gamma_rad_ghz": 0.01,
    "gamma_phi_ghz": 0.0,
    "gamma_loss_ghz": 0.0,
    "v_g": 3.0e8,
    "delta_mhz": 1.0,
    "length_m": 1.0,
    "rabi_mhz": 0.0,
    # probe carrier, as detuning omega_s - Omega in units of Gamma
    "detuning_gamma": 0.5,
    # frequency sweep, omega_s / Omega
    "ratio_min": 0.95,
    "ratio_max": 1.05,
    "ratio_steps": 201,
    # fixed observation point and time
    "x_mm": 5.0,
    "t_ns": 5.0,
    # time-series start point
    "x0_mm": 1.0,
    "t0_ps": 10.0,
    "gamma_t_max": 35.0,
    "carrier_stride": 1,
    # space-time grid
    "x_min_mm": 1.0,
    "x_max_mm": 1000.0,
    "x_steps": 200,
    "t_min_ns": 1.0,
    "t_max_ns": 5.0,
    "t_steps": 2,
    "direction": "forward",
}

_INT_KEYS = {"ratio_steps", "x_steps", "t_steps", "carrier_stride"}
_STR_KEYS = {"direction"}


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Rectangular (x, t) grid; x in metres, t in seconds."""

    x_min: float
    x_max: float
    x_steps: int
    t_min: float
    t_max: float
    t_steps: int
    direction: str = "forward"

    def __post_init__(self):
        if self.x_steps < 2 or self.t_steps < 2:
            raise ValidationError("grid steps must be >= 2")
        if not self.x_max > self.x_min:
            raise ValidationError("x_max must exceed x_min")
        if self.t_max < self.t_min:
            raise ValidationError("t_max must not be below t_min")
        if self.direction not in ("forward", "backward"):
            raise ValidationError("direction must be forward or backward")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_steps)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def skip_mask(self, params: SystemParams) -> list[list[str | None]]:
        """Per-point skip reason (x-major), None where the field can be evaluated."""
        return [[skip_reason(x, t, params, self.direction) for t in self.ts] for x in self.xs]


@dataclass(frozen=True)
class Scenario:
    params: SystemParams
    pulse: PulseSpec
    grid: SpaceTimeGrid
    ratios: np.ndarray
    rabi: float
    x: float
    t: float
    x0: float
    t0: float
    gamma_t_max: float
    carrier_stride: int
    values: dict = field(default_factory=dict)


def _parse_lines(text: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ParseError(f"missing value for {key!r}", lineno)
        try:
            if key in _STR_KEYS:
                values[key] = value
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = float(value)
        except ValueError:
            raise ParseError(f"bad value {value!r} for {key!r}", lineno) from None
    return values


def scenario_from_values(values: dict) -> Scenario:
    """Build and validate a Scenario from already-typed key/value pairs."""
    v = {**DEFAULTS, **values}
    for key, val in v.items():
        if isinstance(val, float) and not math.isfinite(val):
            raise ValidationError(f"{key} must be finite")
    params = SystemParams(
        omega_q=TWO_PI * v["omega_q_ghz"] * 1e9,
        gamma_rad=TWO_PI * v["gamma_rad_ghz"] * 1e9,
        gamma_phi=TWO_PI * v["gamma_phi_ghz"] * 1e9,
        gamma_loss=TWO_PI * v["gamma_loss_ghz"] * 1e9,
        v_g=v["v_g"],
    )
    omega_s = params.omega_q + v["detuning_gamma"] * params.gamma_rad
    pulse = PulseSpec(omega_s=omega_s, delta=TWO_PI * v["delta_mhz"] * 1e6, length=v["length_m"])
    grid = SpaceTimeGrid(
        x_min=v["x_min_mm"] * 1e-3,
        x_max=v["x_max_mm"] * 1e-3,
        x_steps=v["x_steps"],
        t_min=v["t_min_ns"] * 1e-9,
        t_max=v["t_max_ns"] * 1e-9,
        t_steps=v["t_steps"],
        direction=v["direction"],
    )
    if v["ratio_steps"] < 2 or not v["ratio_max"] > v["ratio_min"] or v["ratio_min"] <= 0:
        raise ValidationError("ratio sweep needs 0 < ratio_min < ratio_max and ratio_steps >= 2")
    if v["rabi_mhz"] < 0:
        raise ValidationError("rabi_mhz >= 0 required")
    if v["carrier_stride"] < 1:
        raise ValidationError("carrier_stride >= 1 required")
    if v["t_ns"] <= 0 or v["t0_ps"] <= 0 or v["gamma_t_max"] <= 0:
        raise ValidationError("times must be positive")
    return Scenario(
        params=params,
        pulse=pulse,
        grid=grid,
        ratios=np.linspace(v["ratio_min"], v["ratio_max"], v["ratio_steps"]),
        rabi=TWO_PI * v["rabi_mhz"] * 1e6,
        x=v["x_mm"] * 1e-3,
        t=v["t_ns"] * 1e-9,
        x0=v["x0_mm"] * 1e-3,
        t0=v["t0_ps"] * 1e-12,
        gamma_t_max=v["gamma_t_max"],
        carrier_stride=v["carrier_stride"],
        values=v,
    )


def parse_config_text(text: str) -> Scenario:
    return scenario_from_values(_parse_lines(text))


def parse_config(path) -> Scenario:
    """Read and validate a scenario file.

    Raises
    ------
    ParseError
        Malformed line, unknown or duplicate key; carries the line number.
    ValidationError
        A parameter violates an invariant (e.g. Gamma <= 0).
    """
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def default_scenario() -> Scenario:
    return scenario_from_values({})
