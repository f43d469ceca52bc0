import json

from click.testing import CliRunner

from pathgeom.cli import main

from conftest import FIXTURE_DIR


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_flat_all_pass(tmp_path):
    out = tmp_path / "report.jsonl"
    result = invoke(FIXTURE_DIR / "flat.spec", "--out", out)
    assert result.exit_code == 0, result.output
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert records and all(r["status"] == "PASS" for r in records)
    assert "geometry.validate" in result.output


def test_quad_all_pass():
    assert invoke(FIXTURE_DIR / "quad.spec").exit_code == 0


def test_corrupted_exits_one(tmp_path):
    out = tmp_path / "r.jsonl"
    result = invoke(FIXTURE_DIR / "corrupted.spec", "--out", out)
    assert result.exit_code == 1
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert records[0]["status"] == "FAIL" and records[0]["witness"]
    assert {r["status"] for r in records[1:]} == {"SKIP"}


def test_parse_error_exits_two(tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text('[geometry]\nn = 1\nF = ["p^^2"]\n')
    result = invoke(bad)
    assert result.exit_code == 2
    assert "line 3" in result.output


def test_missing_file_exits_two(tmp_path):
    assert invoke(tmp_path / "nope.spec").exit_code == 2


def test_usage_errors_exit_two():
    spec = FIXTURE_DIR / "flat.spec"
    assert invoke(spec, "--mode", "sloppy").exit_code == 2
    assert invoke(spec, "--suite", "bogus").exit_code == 2
    assert invoke(spec, "--trials", "0").exit_code == 2
    assert invoke().exit_code == 2


def test_suite_and_mode_options():
    result = invoke(FIXTURE_DIR / "sys5.spec", "--suite", "validate,weyl", "--mode", "randomized", "--seed", "5", "--gcd", "content")
    assert result.exit_code == 0
    assert "weyl.scale_transform" in result.output
    assert "tractor" not in result.output


def test_help():
    result = invoke("--help")
    assert result.exit_code == 0
    for flag in ("--suite", "--mode", "--seed", "--trials", "--bound", "--out", "--gcd"):
        assert flag in result.output
