"""Tests for the command line and the grid specs."""

import json
import math
import subprocess
import sys
from pathlib import Path

import pytest
from pydantic import ValidationError

from cli import AxisSpec, GridSpec, GridTarget, main
from cli.commands import parse_complex, parse_ladder, parse_mu, parse_point
from core.errors import DomainError
from numerics.weights import omega


ROOT = Path(__file__).resolve().parent


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# =====================================================================
# Argument helpers
# =====================================================================

def test_parse_helpers():
    assert parse_complex("1.5") == 1.5 + 0j
    assert parse_complex("0, -2") == -2j
    assert parse_point("1,0,2,0.5") == (1 + 0j, 2 + 0.5j)
    assert parse_mu("inf") is None and parse_mu("2") == 2.0
    with pytest.raises(DomainError):
        parse_complex("1,2,3")
    with pytest.raises(DomainError):
        parse_point("1,0")


def test_parse_ladder():
    assert parse_ladder("1e-2:1e-5") == pytest.approx([1e-2, 1e-3, 1e-4, 1e-5])
    assert parse_ladder("1e-2:1e-60:2")[-1] == pytest.approx(1e-60)
    assert len(parse_ladder("1e-2:1e-60:2")) == 30
    assert parse_ladder("0.1,0.01") == [0.1, 0.01]
    with pytest.raises(DomainError):
        parse_ladder("1e-5:1e-2")


# =====================================================================
# Grid specs
# =====================================================================

def test_axis_spec_parse_and_values():
    axis = AxisSpec.parse("lambda_re:0.5:2:4")
    assert axis.values() == pytest.approx([0.5, 1.0, 1.5, 2.0])
    log_axis = AxisSpec.parse("radius:0.5:2:3:log")
    assert log_axis.values() == pytest.approx([0.5, 1.0, 2.0])


def test_axis_spec_validation():
    with pytest.raises(ValidationError):
        AxisSpec.parse("r:1:1:3")
    with pytest.raises(ValidationError):
        AxisSpec.parse("r:-1:1:3:log")
    with pytest.raises(ValidationError):
        AxisSpec.parse("r:0:1:1")
    with pytest.raises(ValueError):
        AxisSpec.parse("r:0:1")


def test_grid_spec_points_in_index_order():
    spec = GridSpec(
        target=GridTarget.KERNEL_J,
        axes=[AxisSpec.parse("lambda_re:1:2:2"), AxisSpec.parse("lambda_im:0:1:3")],
        fixed={"j": 2},
    )
    points = spec.points()
    assert len(points) == 6
    assert [(p["lambda_re"], p["lambda_im"]) for p in points[:3]] == [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0)]
    assert all(p["j"] == 2 for p in points)


def test_grid_spec_validation():
    with pytest.raises(ValidationError):
        GridSpec(target="worm-h", axes=[AxisSpec.parse("lambda_re:1:2:2")])
    with pytest.raises(ValidationError):
        GridSpec(target="gfun", axes=[AxisSpec.parse("zeta_re:0.5:1:2"), AxisSpec.parse("angle:0:1:2")])
    with pytest.raises(ValidationError):
        GridSpec(target="gfun", axes=[AxisSpec.parse("radius:0.5:1:2"), AxisSpec.parse("radius:1:2:2")])
    with pytest.raises(ValidationError):
        GridSpec(target="kernel-j", axes=[AxisSpec.parse("lambda_re:1:2:2")], fixed={"k": 1})


# =====================================================================
# Subcommands
# =====================================================================

def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == 0
    assert "eval-j" in out


def test_unknown_flag_is_a_usage_error(capsys):
    code, _, _ = run_cli(capsys, "eval-j", "--j", "0", "--bogus")
    assert code == 2


def test_eval_j_json(capsys):
    code, out, _ = run_cli(capsys, "eval-j", "--j", "-1", "--z", "0,1", "--w", "0,1")
    assert code == 0
    data = json.loads(out)
    assert data["op"] == "eval-j"
    assert data["inputs"]["z"] == {"re": 0.0, "im": 1.0}
    assert data["value"]["re"] > 0
    assert data["diagnostics"]["representation"] == "integral"


def test_eval_j_with_lambda_and_representation(capsys):
    code, out, _ = run_cli(capsys, "eval-j", "--j", "0", "--lambda", "0.1,1", "--rep", "fourier",
                           "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "value_re,value_im,err_est"
    assert len(lines) == 2


def test_eval_w_outside_domain(capsys):
    code, _, err = run_cli(capsys, "eval-w", "--z", "5,0,1,0", "--w", "1,0,1,0")
    assert code == 2
    assert "not an interior point" in err


def test_eval_u_normalized(capsys):
    code, out, _ = run_cli(capsys, "eval-u", "--z", "0.1,1,1,0", "--w", "0,0.8,1,0", "--normalized", "--tol", "1e-8")
    assert code == 0
    data = json.loads(out)
    assert data["op"] == "eval-u-normalized"
    assert "j_window" in data["diagnostics"]


def test_weight(capsys):
    code, out, _ = run_cli(capsys, "weight", "--j", "-1", "--xi", "0.5", "--v", "1")
    assert code == 0
    data = json.loads(out)
    assert data["alpha_hat"] == pytest.approx(2.0 * math.pi, rel=1e-10)
    assert data["alpha"] == pytest.approx(2.0 * math.pi * math.acos(math.exp(-1.0)))


def test_weight_needs_a_quantity(capsys):
    code, _, _ = run_cli(capsys, "weight", "--j", "0")
    assert code == 2


def test_gfun_circle_csv(capsys):
    code, out, _ = run_cli(capsys, "gfun", "--circle", "1", "--count", "8", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "angle,value_re,value_im,abs"
    assert len(lines) == 9


def test_gfun_outside_annulus_is_a_convergence_error(capsys):
    code, _, err = run_cli(capsys, "gfun", "--zeta", "4.9,0", "--route", "series")
    assert code == 3
    assert "convergence error" in err


def test_probe_lp_csv(capsys):
    code, out, _ = run_cli(capsys, "probe", "lp", "--w", "1,0,1,0", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "delta,partial,increment"
    assert len(lines) == 8


def test_probe_sobolev_with_ladder(capsys):
    code, out, _ = run_cli(capsys, "probe", "sobolev", "--w", "1,0,1,0", "--ladder", "1e-2:1e-20:2")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "sobolev"
    assert len(data["deltas"]) == 10


def test_probe_decay(capsys):
    code, out, _ = run_cli(capsys, "probe", "decay", "--lambda", "1", "--j-max", "20", "--k-min", "5")
    assert code == 0
    data = json.loads(out)
    assert data["rate_plus"] == data["rate_minus"]
    assert data["rate_plus"] < 0


def test_out_writes_a_file(capsys, tmp_path):
    target = tmp_path / "k.json"
    code, out, _ = run_cli(capsys, "eval-j", "--j", "0", "--lambda", "1", "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["op"] == "eval-j"


def test_grid_csv(capsys):
    code, out, _ = run_cli(capsys, "grid", "--target", "kernel-j", "--axis", "lambda_re:0.5:2:4",
                           "--fixed", "j=0", "--format", "csv", "--workers", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lambda_re,value_re,value_im,err_est"
    assert [line.split(",")[0] for line in lines[1:]] == ["0.5", "1", "1.5", "2"]


def test_grid_bad_fixed(capsys):
    code, _, _ = run_cli(capsys, "grid", "--target", "gfun", "--axis", "radius:0.5:1:2", "--fixed", "angle")
    assert code == 2


def test_grid_reruns_are_byte_identical():
    cmd = [sys.executable, "main.py", "grid", "--target", "gfun",
           "--axis", "radius:0.5:2:3", "--axis", "angle:0:3:2", "--format", "csv"]
    first = subprocess.run(cmd, cwd=ROOT, capture_output=True, check=True)
    second = subprocess.run(cmd, cwd=ROOT, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert len(first.stdout.decode().splitlines()) == 7


def test_verify_selected_checks(capsys):
    code, out, _ = run_cli(capsys, "verify", "--check", "C01", "--check", "C02", "--seed", "11")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# worm-bergman verification (seed 11)"
    assert lines[1].startswith("[PASS] C01")
    assert lines[2].startswith("[PASS] C02")


def test_verify_json_and_unknown_check(capsys):
    code, out, _ = run_cli(capsys, "verify", "--check", "C02", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["op"] == "verify" and data["total"] == 1
    code, _, _ = run_cli(capsys, "verify", "--check", "C99")
    assert code == 2


def test_weight_csv_splits_complex_values(capsys):
    code, out, _ = run_cli(capsys, "weight", "--j", "2", "--w1", "0.3,0.1", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    cells = dict(zip(header.split(","), row.split(",")))
    value = complex(omega(2, 0.3 + 0.1j))
    assert float(cells["omega_re"]) == value.real
    assert float(cells["omega_im"]) == value.imag


def test_budget_belongs_to_quadrature_commands(capsys):
    code, _, _ = run_cli(capsys, "eval-j", "--j", "0", "--lambda", "1", "--budget", "100")
    assert code == 2
    code, _, err = run_cli(capsys, "probe", "norm", "--eta=-0.5,0", "--c", "1", "--j", "0", "--m", "0",
                           "--budget", "10")
    assert code == 3
    assert "budget" in err
