"""
Tests for the command dispatcher and the polarise script.
"""
import json

import pytest

from scripts.polarise import main
from src.cli import EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE, SamplingConfig, run


@pytest.fixture
def config(mocker):
  mocker.patch("src.cli.config.load_dotenv")
  return SamplingConfig(seed=3, samples=4, degree_cap=2)


def test_lin_passes(fixture_text, config):
  report, code = run("lin", fixture_text("f3.spec"), config)
  assert code == EXIT_PASS, report.to_text()
  assert report.emitted.startswith("bundle ")


def test_roundtrip_passes(fixture_text, config):
  report, code = run("roundtrip", fixture_text("f3.spec"), config)
  assert code == EXIT_PASS, report.to_text()
  assert report.emitted.startswith("map I :")


def test_sign_rule_failure_exits_with_one(fixture_text, config):
  report, code = run("superise-check", fixture_text("bad_sign.spec"), config)
  assert code == EXIT_CHECK_FAILED
  failed = [check for check in report.checks if not check.passed]
  assert any("u1" in check.detail and "u2" in check.detail for check in failed)


def test_errors_inside_a_command_fail_the_run(fixture_text, config):
  """Refusals are reported as a failed check rather than raised."""
  report, code = run("superise", fixture_text("f3.spec"), config)
  assert code == EXIT_CHECK_FAILED
  assert report.checks[-1].name == "superise"


def test_sigma_for_one_permutation(fixture_text, config):
  report, code = run("sigma", fixture_text("f3.spec"), config, g="2,1,3")
  assert code == EXIT_PASS, report.to_text()
  assert report.emitted.startswith("map sigma(2,1,3)")

  _, code = run("sigma", fixture_text("f3.spec"), config, g="2,1")
  assert code == EXIT_CHECK_FAILED


@pytest.mark.parametrize("command, text", [
  ("polarise", "bundle G { base x1; }"),
  ("validate", "bundle G {"),
  ("validate", ""),
])
def test_usage_errors(command, text, config):
  report, code = run(command, text, config)
  assert code == EXIT_USAGE
  assert report.checks[0].name == "input"
  assert not report.passed


def test_non_polynomial_law_is_a_usage_error(fixture_text, config):
  text = fixture_text("f2.spec").replace("y1 = y1*A[1;1]", "y1 = y1^y2*A[1;1]")
  report, code = run("validate", text, config)
  assert code == EXIT_USAGE
  assert "integer literals" in report.checks[0].detail


def test_machine_report_is_deterministic(fixture_text, config):
  text = fixture_text("skew.spec")
  first, _ = run("skew-form", text, config)
  second, _ = run("skew-form", text, config)
  assert first.render("machine") == second.render("machine")
  data = json.loads(first.render("machine"))
  assert list(data) == ["command", "digest", "passed", "checks", "diagnostics", "emitted"]
  assert data["passed"] is True


def test_unknown_format_is_refused(fixture_text, config):
  report, _ = run("validate", fixture_text("f2.spec"), config)
  with pytest.raises(ValueError):
    report.render("yaml")


def test_unexpected_exceptions_are_reported(fixture_text, config, mocker):
  mocker.patch("src.cli.commands.validate", side_effect=RuntimeError("boom"))
  report, code = run("validate", fixture_text("f2.spec"), config)
  assert code == EXIT_CHECK_FAILED
  assert "boom" in report.checks[-1].detail


def test_text_report_lists_checks(fixture_text, config):
  report, _ = run("validate", fixture_text("skew.spec"), config)
  text = report.to_text()
  assert text.startswith("=" * 50)
  assert "validate: PASS" in text
  assert "[PASS] symmetric skew sigma" in text


def test_script_writes_report(fixture_text, tmp_path, capsys, mocker):
  mocker.patch("src.cli.config.load_dotenv")
  spec = tmp_path / "f2.spec"
  spec.write_text(fixture_text("f2.spec"), encoding="utf-8")
  output = tmp_path / "report.json"
  code = main(["plin", "--input", str(spec), "--output", str(output),
               "--format", "machine", "--seed", "1"])
  assert code == EXIT_PASS
  assert json.loads(output.read_text(encoding="utf-8"))["command"] == "plin"
  assert "Report saved to" in capsys.readouterr().out


def test_script_usage_errors(tmp_path, capsys, mocker):
  mocker.patch("src.cli.config.load_dotenv")
  assert main(["nonsense", "--input", "x"]) == EXIT_USAGE
  assert main(["validate", "--input", str(tmp_path / "missing.spec")]) == EXIT_USAGE
  assert "Error reading" in capsys.readouterr().err
