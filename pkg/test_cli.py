import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app import create_cli
from app.exceptions import ConfigValueError, SchemaError
from app.runs import load_config, parse_config, serialize_config
from conftest import problem_document

HEAT_LIMIT = 0.372708


@pytest.fixture
def cli():
    return create_cli()


@pytest.fixture
def runner():
    return CliRunner()


def _read_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


# ---- exponents ----


def test_exponents_command(runner, cli):
    result = runner.invoke(cli, ["exponents", "3", "11/5"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["r_fluid"] == "11/3"
    assert data["two_pprime"] == "11/3"
    assert data["flags"]["two_pprime_le_r_fluid"] is True


def test_exponents_rejects_p_one(runner, cli):
    assert runner.invoke(cli, ["exponents", "2", "1"]).exit_code == 2


# ---- solve ----


def test_solve_heat(runner, cli, write_problem, tmp_path):
    out = tmp_path / "solve"
    result = runner.invoke(cli, ["solve", "--config", write_problem("heat"), "--out", str(out)])
    assert result.exit_code == 0
    df = pd.read_csv(out / "trajectory.csv")
    assert len(df) == 11
    assert df["norm_H"].iloc[-1] == pytest.approx(HEAT_LIMIT, abs=0.02)

    audit = _read_json(out / "audit.json")
    assert audit["passed"] is True
    assert audit["level"] == 4
    assert len(audit["reports"]) == 4
    derivative = audit["time_derivative"]
    assert len(derivative["per_step"]) == 10
    assert derivative["composite"] > 0
    assert derivative["s"] == 2.0

    manifest = _read_json(out / "manifest.json")
    assert manifest["level"] == 4
    assert set(manifest["artifacts"]) == {"trajectory", "audit", "manifest"}
    assert len(manifest["config_digest"]) == 64


def test_solve_level_override(runner, cli, write_problem, tmp_path):
    out = tmp_path / "solve"
    args = ["solve", "--config", write_problem("heat"), "--level", "6", "--out", str(out)]
    assert runner.invoke(cli, args).exit_code == 0
    df = pd.read_csv(out / "trajectory.csv")
    assert "c_6" in df.columns and "c_7" not in df.columns


def test_zero_step_solve(runner, cli, write_problem, tmp_path):
    out = tmp_path / "solve"
    path = write_problem("heat", nsteps=0)
    assert runner.invoke(cli, ["solve", "--config", path, "--out", str(out)]).exit_code == 0
    assert len(pd.read_csv(out / "trajectory.csv")) == 1
    assert _read_json(out / "audit.json")["time_derivative"]["per_step"] == []


def test_solve_failure_exits_one(runner, cli, write_problem, tmp_path):
    path = write_problem("scalar", newton_maxit=1, newton_tol=1e-14)
    result = runner.invoke(cli, ["solve", "--config", path, "--out", str(tmp_path / "solve")])
    assert result.exit_code == 1
    assert not (tmp_path / "solve" / "trajectory.csv").exists()


# ---- problem files ----


def test_corrupted_json_exits_two(runner, cli, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"space": {', encoding="utf-8")
    assert runner.invoke(cli, ["solve", "--config", str(path)]).exit_code == 2


def test_missing_file_is_a_usage_error(runner, cli, tmp_path):
    assert runner.invoke(cli, ["check", "--config", str(tmp_path / "none.json")]).exit_code == 2


@pytest.mark.parametrize(
    "overrides, error_class, pointer",
    [
        ({"operator": {"p": 0.5}}, ConfigValueError, "/operator/p"),
        ({"T": -1.0}, ConfigValueError, "/T"),
        ({"space": {"dim": 3}}, SchemaError, "/space/dim"),
        ({"space": {"kind": "sphere"}}, SchemaError, "/space/kind"),
        ({"colour": "blue"}, SchemaError, "/colour"),
        ({"operator": {"convection": True}}, SchemaError, ""),
    ],
)
def test_problem_file_errors(overrides, error_class, pointer):
    with pytest.raises(error_class) as info:
        load_config(problem_document("heat", overrides))
    assert info.value.pointer == pointer


def test_non_finite_numbers_are_rejected(tmp_path):
    path = tmp_path / "nan.json"
    text = json.dumps(problem_document("heat")).replace('"T": 0.1', '"T": NaN')
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigValueError):
        parse_config(str(path))


def test_schema_error_exit_code(runner, cli, write_problem):
    path = write_problem("heat", space={"dim": 3})
    result = runner.invoke(cli, ["check", "--config", path])
    assert result.exit_code == 2
    assert "/space/dim" in result.output


@pytest.mark.parametrize("name", ["heat", "scalar", "fluid"])
def test_problem_round_trip(make_config, name):
    cfg = make_config(name)
    assert load_config(json.loads(json.dumps(serialize_config(cfg)))) == cfg


# ---- check ----


def test_check_scalar(runner, cli, write_problem, tmp_path):
    out = tmp_path / "check"
    result = runner.invoke(cli, ["check", "--config", write_problem("scalar"), "--out", str(out)])
    assert result.exit_code == 0
    report = _read_json(out / "report.json")
    names = [r["name"] for r in report["reports"]]
    assert names[:3] == ["coercivity", "growth", "monotonicity"]
    assert "g2-admissibility" in names
    assert report["exponents"]["r0"] == "9"


def test_check_flags_growth_beyond_r0(runner, cli, write_problem, tmp_path):
    out = tmp_path / "check"
    path = write_problem("scalar", operator={"nemytskii": {"r": 10}})
    result = runner.invoke(cli, ["check", "--config", path, "--out", str(out)])
    assert result.exit_code == 1
    reports = {r["name"]: r for r in _read_json(out / "report.json")["reports"]}
    assert reports["g2-admissibility"]["passed"] is False


def test_check_is_deterministic(runner, cli, write_problem, tmp_path):
    path = write_problem("heat")
    first = runner.invoke(cli, ["check", "--config", path, "--seed", "42"])
    second = runner.invoke(cli, ["check", "--config", path, "--seed", "42"])
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
    assert json.loads(first.output)["seed"] == 42

    for run in ("a", "b"):
        args = ["check", "--config", path, "--seed", "42", "--out", str(tmp_path / run)]
        assert runner.invoke(cli, args).exit_code == 0
    report_a = (tmp_path / "a" / "report.json").read_bytes()
    assert report_a == (tmp_path / "b" / "report.json").read_bytes()
    assert report_a.decode("utf-8") == first.output


def test_check_fluid_includes_cancellation(runner, cli, write_problem, tmp_path):
    out = tmp_path / "check"
    path = write_problem("fluid", level=2)
    result = runner.invoke(cli, ["check", "--config", path, "--out", str(out)])
    assert result.exit_code == 0
    names = [r["name"] for r in _read_json(out / "report.json")["reports"]]
    assert "convection-cancellation" in names


# ---- converge ----


def test_converge_rejects_decreasing_levels(runner, cli, write_problem):
    result = runner.invoke(cli, ["converge", "--config", write_problem("heat"), "--levels", "4,2"])
    assert result.exit_code == 2


def test_converge_solve_failure_exits_one(runner, cli, write_problem, tmp_path):
    out = tmp_path / "converge"
    path = write_problem("scalar", newton_maxit=1, newton_tol=1e-14)
    args = ["converge", "--config", path, "--levels", "2,4", "--out", str(out)]
    assert runner.invoke(cli, args).exit_code == 1
    assert not (out / "study.csv").exists()


def test_converge_heat(runner, cli, write_problem, tmp_path):
    out = tmp_path / "converge"
    path = write_problem("heat", initial={"kind": "parabola"})
    args = ["converge", "--config", path, "--levels", "2,4,8", "--out", str(out)]
    assert runner.invoke(cli, args).exit_code == 0
    df = pd.read_csv(out / "study.csv")
    assert df["n"].tolist() == [2, 4, 8]
    assert df["e_V"].iloc[0] > df["e_V"].iloc[1] > df["e_V"].iloc[2] == 0.0
    assert _read_json(out / "manifest.json")["levels"] == [2, 4, 8]
