import json

import pytest
from click.testing import CliRunner

from medcalc.cli import main

from conftest import GOLDEN_PATH


@pytest.fixture()
def runner():
    return CliRunner()


def test_validate_config_ok(runner):
    result = runner.invoke(main, ["validate-config", str(GOLDEN_PATH)])
    assert result.exit_code == 0
    assert "OK: 3 equations, 2 scales" in result.output


def test_validate_config_violation_exits_nonzero(runner, tmp_path):
    doc = {
        "indicator": {"x": {"kind": "real", "range": [5, 1], "precision": 1}},
        "equation": {},
        "scale": {},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    result = runner.invoke(main, ["validate-config", str(path)])
    assert result.exit_code == 1
    assert "range-order" in result.output

    path.write_text("{broken", encoding="utf-8")
    result = runner.invoke(main, ["validate-config", str(path)])
    assert result.exit_code == 2


def test_expr_eval(runner):
    result = runner.invoke(
        main,
        ["expr", "eval", "2*na + glu/18 + bun/2.8",
         "-b", "na=1793.74", "-b", "glu=297.0", "-b", "bun=9.44"],
    )
    assert result.exit_code == 0
    assert result.output.strip() == "3607.3514285714286"

    result = runner.invoke(main, ["expr", "eval", "1/x", "-b", "x=0"])
    assert result.exit_code == 1
    assert "division by zero" in result.output


def test_export_byte_identical(runner, tmp_path):
    args = ["export", "--count", "25", "--seed", "42", "--catalog", str(GOLDEN_PATH)]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert runner.invoke(main, args + ["-o", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["-o", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text(encoding="utf-8").splitlines()) == 25


def test_gen_task_filter_to_stdout(runner):
    result = runner.invoke(
        main,
        ["gen", "--count", "3", "--seed", "1", "--task", "Body Mass Index (BMI)",
         "--catalog", str(GOLDEN_PATH)],
    )
    assert result.exit_code == 0
    rows = [json.loads(line) for line in result.output.splitlines() if line.strip()]
    assert len(rows) == 3
    assert {r["task_name"] for r in rows} == {"Body Mass Index (BMI)"}


def test_verify_exit_codes(runner, tmp_path):
    case = {"family": "scale", "target": "3", "precision": None}
    case_path = tmp_path / "case.json"
    case_path.write_text(json.dumps(case), encoding="utf-8")

    good = tmp_path / "good.txt"
    good.write_text("thinking…\n\\boxed{score: 3}", encoding="utf-8")
    result = runner.invoke(main, ["verify", "--case", str(case_path), "--response", str(good)])
    assert result.exit_code == 0
    assert "reward: 1" in result.output

    bad = tmp_path / "bad.txt"
    bad.write_text("\\boxed{score: 2}", encoding="utf-8")
    result = runner.invoke(main, ["verify", "--case", str(case_path), "--response", str(bad)])
    assert result.exit_code == 1
    assert "reward: 0" in result.output


def test_stats_command(runner):
    result = runner.invoke(main, ["stats", "--catalog", str(GOLDEN_PATH)])
    assert result.exit_code == 0
    stats = json.loads(result.output)
    assert stats["families"] == {"equation": 3, "scale": 2}


def test_default_catalog_env_var(runner, monkeypatch):
    monkeypatch.setenv("MEDCALC_CATALOG", str(GOLDEN_PATH))
    result = runner.invoke(main, ["stats"])
    assert json.loads(result.output)["families"]["equation"] == 3
    monkeypatch.delenv("MEDCALC_CATALOG")
    result = runner.invoke(main, ["stats"])
    assert json.loads(result.output)["families"]["equation"] >= 15  # packaged seed catalog
