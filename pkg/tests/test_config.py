import math

import pytest

from qubit_scatter.config import default_scenario, parse_config, parse_config_text
from qubit_scatter.errors import ParseError, ValidationError


def test_defaults_reproduce_reference_parameters():
    sc = default_scenario()
    assert sc.params.wavelength == pytest.approx(0.06, rel=1e-12)
    assert sc.params.omega_q == pytest.approx(2 * math.pi * 5e9)
    assert sc.params.gamma_rad == pytest.approx(2 * math.pi * 1e7)
    assert sc.pulse.delta == pytest.approx(2 * math.pi * 1e6)
    assert sc.x0 == pytest.approx(1e-3) and sc.t0 == pytest.approx(10e-12)
    assert list(sc.grid.ts * 1e9) == pytest.approx([1.0, 5.0])


def test_hz_fields_converted_once(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("# comment\nomega_q_ghz = 6.0  # trailing\n\ngamma_rad_ghz=0.02\ndetuning_gamma = -1\n")
    sc = parse_config(path)
    assert sc.params.omega_q == pytest.approx(2 * math.pi * 6e9)
    assert sc.pulse.omega_s == pytest.approx(sc.params.omega_q - sc.params.gamma_rad)


def test_zero_gamma_rejected():
    with pytest.raises(ValidationError, match="gamma_rad"):
        parse_config_text("gamma_rad_ghz = 0\n")


@pytest.mark.parametrize(
    "text,line",
    [("omega_q_ghz 5\n", 1), ("\n\nbogus = 1\n", 3), ("x_steps = 2.5\n", 1), ("v_g = 1\nv_g = 2\n", 2), ("v_g =\n", 1)],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_config_text(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


@pytest.mark.parametrize(
    "text",
    ["x_steps = 1\n", "x_min_mm = 5\nx_max_mm = 1\n", "direction = up\n", "ratio_min = 1.1\nratio_max = 1.0\n", "delta_mhz = -1\n", "v_g = nan\n"],
)
def test_invariant_violations(text):
    with pytest.raises(ValidationError):
        parse_config_text(text)


def test_straddling_grid_marks_skips():
    sc = parse_config_text("x_min_mm = -10\nx_max_mm = 10\nx_steps = 5\nt_min_ns = 1\nt_max_ns = 2\ndirection = forward\n")
    mask = sc.grid.skip_mask(sc.params)
    assert mask[0] == ["causality", "causality"]
    assert mask[2] == ["singularity", "singularity"]
    assert mask[4] == [None, None]


def test_missing_file():
    with pytest.raises(OSError):
        parse_config("/nonexistent/scenario.cfg")
