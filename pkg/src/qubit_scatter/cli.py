"""Command line front end: ``qubit-scatter <command> [options]``.

Every figure command writes plot-ready rows (CSV or JSON) and includes
the stationary |T|^2, |R|^2 reference columns.  Points that cannot be
evaluated are kept as rows with ``status`` set to a reason code
(``causality``, ``singularity`` or ``precondition``) and empty values.

Exit codes: 0 success, 1 validation failure, 2 config error,
3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from .config import Scenario, default_scenario, parse_config
from .errors import ConvergenceError, DomainError, ParseError, PreconditionError, ValidationError
from .fields import (
    asymptotic_field,
    field,
    fit_oscillation_frequency,
    large_time_intensity,
    offres_intensity,
    stroboscopic_times,
    timeseries_intensity,
)
from .kernels import skip_reason
from .params import DriveSpec
from .stationary import reflection, reflection_driven, transmission, transmission_driven
from .validation import run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 1, 2, 3

# transient skipped before fitting the oscillation frequency, in units of 1/Gamma
FIT_SKIP_GAMMA_T = 5.0


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.16e}"


class Table:
    """Column names (with units) plus rows of values, in emission order."""

    def __init__(self, columns: list[str], meta: dict | None = None):
        self.columns = columns
        self.rows: list[list] = []
        self.meta = meta or {}

    def add(self, values: dict):
        self.rows.append([values.get(c) for c in self.columns])

    def write(self, stream, fmt: str):
        if fmt == "json":
            rows = [dict(zip(self.columns, r)) for r in self.rows]
            json.dump({"meta": self.meta, "columns": self.columns, "rows": rows}, stream, indent=1, allow_nan=False, default=float)
            stream.write("\n")
            return
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow([_fmt(v) for v in r])


def _map_rows(fn, items, threads: int):
    """Evaluate ``fn`` on every item, preserving input order."""
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _stationary_cols(sc: Scenario, omega_s: float, lossy: bool) -> dict:
    drive = DriveSpec(omega_s, sc.rabi)
    return {
        "T_sq_stationary": abs(transmission(sc.params, omega_s, lossy)) ** 2,
        "R_sq_stationary": abs(reflection(sc.params, omega_s, lossy)) ** 2,
        "T_sq_driven": abs(transmission_driven(sc.params, drive)) ** 2,
        "R_sq_driven": abs(reflection_driven(sc.params, drive)) ** 2,
    }


STATIONARY_COLUMNS = ["T_sq_stationary", "R_sq_stationary", "T_sq_driven", "R_sq_driven"]


def cmd_afc(sc: Scenario, lossy: bool = False, threads: int = 1) -> Table:
    """Large-time transmittance and reflectance vs omega_s/Omega at fixed |x|."""
    cols = ["omega_over_Omega", "x_mm", "transmittance", "reflectance", *STATIONARY_COLUMNS, "status"]
    table = Table(cols, {"command": "afc", "x_mm": sc.x * 1e3, "lossy": lossy})
    x = abs(sc.x)

    def row(ratio):
        ws = ratio * sc.params.omega_q
        out = {"omega_over_Omega": ratio, "x_mm": x * 1e3, **_stationary_cols(sc, ws, lossy)}
        try:
            out["transmittance"] = large_time_intensity(x, sc.params, ws, "forward", lossy)
            out["reflectance"] = large_time_intensity(-x, sc.params, ws, "backward", lossy)
            out["status"] = "ok"
        except DomainError:
            out["status"] = "singularity"
        except PreconditionError:
            out["status"] = "precondition"
        return out

    for r in _map_rows(row, list(sc.ratios), threads):
        table.add(r)
    return table


def cmd_map2d(sc: Scenario, lossy: bool = False, threads: int = 1) -> Table:
    """|u/A|^2 over (x, omega_s/Omega) at fixed t, x-major."""
    grid = sc.grid
    cols = ["x_mm", "omega_over_Omega", "t_ns", "intensity", "u_re", "u_im", *STATIONARY_COLUMNS, "status"]
    table = Table(cols, {"command": "map2d", "direction": grid.direction, "t_ns": sc.t * 1e9, "lossy": lossy})
    t = sc.t

    def x_row(x):
        rows = []
        reason = skip_reason(x, t, sc.params, grid.direction)
        for ratio in sc.ratios:
            ws = ratio * sc.params.omega_q
            out = {"x_mm": x * 1e3, "omega_over_Omega": ratio, "t_ns": t * 1e9, **_stationary_cols(sc, ws, lossy)}
            if reason is None:
                u = field(x, t, sc.params, replace(sc.pulse, omega_s=ws), grid.direction, lossy).u_over_A
                out.update(intensity=abs(u) ** 2, u_re=u.real, u_im=u.imag, status="ok")
            else:
                out["status"] = reason
            rows.append(out)
        return rows

    for rows in _map_rows(x_row, list(grid.xs), threads):
        for r in rows:
            table.add(r)
    return table


def cmd_timeseries(sc: Scenario, lossy: bool = False, threads: int = 1) -> Table:
    """|u(x0, t)/A|^2 sampled once per carrier period, plus the fitted oscillation frequency."""
    p, pulse = sc.params, sc.pulse
    times = stroboscopic_times(sc.t0, sc.gamma_t_max / p.gamma_rad, pulse.omega_s, sc.carrier_stride)
    chunks = np.array_split(times, max(1, min(threads, len(times))))
    parts = _map_rows(lambda ts: timeseries_intensity(sc.x0, sc.t0, p, pulse, ts, lossy), chunks, threads)
    intensity = np.concatenate(parts)
    fit_from = times >= FIT_SKIP_GAMMA_T / p.gamma_rad
    fit = fit_oscillation_frequency(times[fit_from], intensity[fit_from])
    freq = fit.frequency
    meta = {
        "command": "timeseries",
        "x0_mm": sc.x0 * 1e3,
        "detuning_over_gamma": (pulse.omega_s - p.omega_q) / p.gamma_rad,
        "fit_omega_over_gamma": None if freq is None else freq / p.gamma_rad,
        "fit_periods": fit.periods,
        "lossy": lossy,
    }
    cols = ["t_ns", "gamma_t", "intensity", "fit_omega_over_gamma", *STATIONARY_COLUMNS, "status"]
    table = Table(cols, meta)
    stat = _stationary_cols(sc, pulse.omega_s, lossy)
    for t, val in zip(times, intensity):
        table.add(
            {"t_ns": t * 1e9, "gamma_t": p.gamma_rad * t, "intensity": val,
             "fit_omega_over_gamma": meta["fit_omega_over_gamma"], **stat, "status": "ok"}
        )
    return table


def cmd_spatial(sc: Scenario, lossy: bool = False, threads: int = 1) -> Table:
    """Off-resonant transmittance/reflectance vs |x| at omega_s = Omega + Gamma/2."""
    p = sc.params
    pulse = replace(sc.pulse, omega_s=p.omega_q + 0.5 * p.gamma_rad)
    lam = p.wavelength
    cols = [
        "x_mm", "x_over_lambda", "transmittance", "reflectance",
        "transmittance_asymptotic", "reflectance_asymptotic", "envelope_upper", "envelope_lower",
        "transmittance_large_time", *STATIONARY_COLUMNS, "status",
    ]
    table = Table(cols, {"command": "spatial", "omega_over_Omega": pulse.omega_s / p.omega_q})

    def row(x):
        x = abs(x)
        out = {"x_mm": x * 1e3, "x_over_lambda": x / lam, **_stationary_cols(sc, pulse.omega_s, lossy)}
        try:
            a = pulse.omega_s * x / p.v_g
            out["transmittance"] = offres_intensity(x, p, pulse, "forward")
            out["reflectance"] = offres_intensity(-x, p, pulse, "backward")
            out["transmittance_asymptotic"] = 0.5 + math.cos(a) / (2 * math.pi * a)
            out["reflectance_asymptotic"] = 0.5 - math.cos(a) / (2 * math.pi * a)
            out["envelope_upper"] = 0.5 + 1.0 / (2 * math.pi * a)
            out["envelope_lower"] = 0.5 - 1.0 / (2 * math.pi * a)
            out["transmittance_large_time"] = large_time_intensity(x, p, pulse.omega_s, "forward", lossy)
            out["status"] = "ok"
        except DomainError:
            out["status"] = "singularity"
        return out

    for r in _map_rows(row, list(sc.grid.xs), threads):
        table.add(r)
    return table


def cmd_asymptotics(sc: Scenario, lossy: bool = False, threads: int = 1) -> Table:
    """Full field vs its far-field form on the grid, with residuals."""
    grid, p, pulse = sc.grid, sc.params, sc.pulse
    cols = [
        "x_mm", "t_ns", "full_re", "full_im", "asymptotic_re", "asymptotic_im",
        "residual_full_minus_stationary", "residual_full_minus_asymptotic", "correction_scale",
        *STATIONARY_COLUMNS, "status",
    ]
    table = Table(cols, {"command": "asymptotics", "direction": grid.direction, "lossy": lossy})
    stat = _stationary_cols(sc, pulse.omega_s, lossy)

    def x_row(x):
        rows = []
        for t in grid.ts:
            out = {"x_mm": x * 1e3, "t_ns": t * 1e9, **stat}
            reason = skip_reason(x, t, p, grid.direction)
            if reason is not None:
                out["status"] = reason
                rows.append(out)
                continue
            sample = field(x, t, p, pulse, grid.direction, lossy)
            try:
                asym = asymptotic_field(x, t, p, pulse, grid.direction, lossy)
            except PreconditionError:
                out["status"] = "precondition"
                rows.append(out)
                continue
            u = sample.u_over_A
            out.update(
                full_re=u.real, full_im=u.imag, asymptotic_re=asym.value.real, asymptotic_im=asym.value.imag,
                residual_full_minus_stationary=abs(u - sample.stationary),
                residual_full_minus_asymptotic=abs(u - asym.value),
                correction_scale=asym.correction_scale, status="ok",
            )
            rows.append(out)
        return rows

    for rows in _map_rows(x_row, list(grid.xs), threads):
        for r in rows:
            table.add(r)
    return table


def cmd_validate(sc: Scenario, lossy: bool = False, threads: int = 1, include_mode_sum: bool = True) -> tuple[dict, int]:
    """Run the invariant suite; returns the JSON report and the exit code."""
    checks = run_checks(sc.params, include_mode_sum=include_mode_sum)
    passed = all(c.passed for c in checks)
    report = {
        "passed": passed,
        "checks": [
            {**c.as_dict(), "measured": c.measured if math.isfinite(c.measured) else None} for c in checks
        ],
    }
    return report, EXIT_OK if passed else EXIT_VALIDATION


COMMANDS = {
    "afc": cmd_afc,
    "map2d": cmd_map2d,
    "timeseries": cmd_timeseries,
    "spatial": cmd_spatial,
    "asymptotics": cmd_asymptotics,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubit-scatter",
        description="Space-time field of a single photon scattered by a qubit in a 1D waveguide.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file (key = value lines); defaults if omitted")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads for grid rows")
    common.add_argument("--lossy", action="store_true", help="fold dephasing and intrinsic loss into the qubit frequency")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "afc": "large-time transmittance/reflectance vs probe frequency",
        "map2d": "intensity map over x and probe frequency at fixed t",
        "timeseries": "intensity vs time at x0 with oscillation-frequency fit",
        "spatial": "off-resonant transmittance/reflectance vs distance",
        "asymptotics": "full vs far-field fields and residuals",
        "validate": "run the invariant suite and print a JSON report",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "validate":
            p.add_argument("--skip-mode-sum", action="store_true", help="omit the slow mode-sum checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = parse_config(args.config) if args.config else default_scenario()
    except (ParseError, ValidationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    threads = max(1, args.threads)
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        if args.command == "validate":
            report, code = cmd_validate(sc, args.lossy, threads, include_mode_sum=not args.skip_mode_sum)
            json.dump(report, out, indent=1)
            out.write("\n")
            return code
        table = COMMANDS[args.command](sc, args.lossy, threads)
        table.write(out, args.format)
        return EXIT_OK
    except BrokenPipeError:
        return EXIT_OK
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
