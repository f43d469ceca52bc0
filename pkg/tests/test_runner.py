import json

import pytest

from pathgeom.runner import SUITE_CHECKS, planned_checks, run
from pathgeom.specfile import load_spec, parse_spec
from pathgeom.verify import FAIL, PASS, SKIP, UNSUPPORTED

from conftest import FIXTURE_DIR

FIXTURES = ["flat", "quad", "lin", "sys5"]


def spec(name):
    return load_spec(FIXTURE_DIR / f"{name}.spec")


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("gcd", ["full", "content"])
def test_fixtures_pass(name, gcd):
    report = run(spec(name), gcd=gcd)
    assert report.exit_code == 0
    assert all(c.status == PASS for c in report.checks), report.table()


def test_report_lists_every_check_once_in_order():
    s = spec("flat")
    report = run(s)
    ids = [c.id for c in report.checks]
    assert ids == planned_checks(s, ["all"])
    assert len(ids) == len(set(ids))
    assert "tractor.curvature" in ids
    assert "tractor.curvature" not in [c.id for c in run(spec("quad")).checks]


def test_corrupted_spec_gates_downstream():
    report = run(spec("corrupted"))
    assert report.checks[0].id == "geometry.validate"
    assert report.checks[0].status == FAIL
    assert {c.status for c in report.checks[1:]} == {SKIP}
    assert report.exit_code == 1


def test_gating_applies_without_validate_suite():
    report = run(spec("corrupted"), suites=["weyl"])
    assert [c.id for c in report.checks] == list(SUITE_CHECKS["weyl"])
    assert all(c.status == SKIP for c in report.checks)
    assert report.exit_code == 0


def test_suite_selection():
    report = run(spec("quad"), suites=["invariant-op", "bgg"])
    assert [c.id for c in report.checks] == ["bgg.operators", "tractor.invariant_op"]


def test_distinguished_unsupported_for_non_coordinate_vertical():
    text = """\
[geometry]
mode = "frames"
n = 1
coords = ["x", "y", "p"]
E = ["1", "p", "0"]
V = [["0", "1", "1"]]
[scale]
scale_change = "1+x^2"
"""
    report = run(parse_spec(text), suites=["validate", "distinguished"])
    statuses = {c.id: c.status for c in report.checks}
    assert statuses["geometry.validate"] == PASS
    assert statuses["bgg.find_distinguished"] == UNSUPPORTED
    assert statuses["schouten.distinguished"] == UNSUPPORTED
    assert report.exit_code == 0


@pytest.mark.parametrize("name", FIXTURES)
def test_randomized_mode_never_passes_where_exact_fails(name):
    exact = run(spec(name))
    rand = run(spec(name), mode="randomized", seed=0)
    for e, r in zip(exact.checks, rand.checks):
        assert e.id == r.id
        if e.status == FAIL:
            assert r.status == FAIL
        assert r.status == e.status


def test_randomized_mode_fails_on_corrupted_input():
    assert run(spec("corrupted"), mode="randomized").exit_code == 1


def test_deterministic_reports():
    a = [(r["id"], r["status"], r["witness"]) for r in run(spec("sys5"), seed=3).records()]
    b = [(r["id"], r["status"], r["witness"]) for r in run(spec("sys5"), seed=3).records()]
    assert a == b


def test_json_lines_records():
    report = run(spec("quad"), suites=["validate"])
    lines = report.json_lines().splitlines()
    rec = json.loads(lines[0])
    assert set(rec) == {"id", "status", "witness", "millis"}
    assert rec["status"] == PASS and rec["witness"] is None


def test_non_polynomial_scales_run():
    s = spec("quad")
    s.scale, s.scale_change = "1+p^2", "1+p^2"
    report = run(s, suites=["weyl", "schouten", "tractor", "invariant-op"])
    assert report.exit_code == 0, report.table()
