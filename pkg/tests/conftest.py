from __future__ import annotations

from pathlib import Path

import pytest

from pathgeom.chart import Chart
from pathgeom.geometry import ODESystem, from_ode, ode_coords
from pathgeom.weyl import Scale

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "pathgeom" / "fixtures"

ODE_FIXTURES = {
    "flat": (1, ("0",)),
    "quad": (1, ("p^2",)),
    "lin": (1, ("y",)),
    "sys5": (2, ("p1^2", "y1")),
}


def ode(name: str):
    n, F = ODE_FIXTURES[name]
    return from_ode(ODESystem(n, F))


def chart_for(g) -> Chart:
    return g.chart


def expr(g, text: str):
    return g.chart.parse(text)


def scale(g, text: str) -> Scale:
    return Scale(g.chart.parse(text))


@pytest.fixture(params=list(ODE_FIXTURES))
def fixture_geometry(request):
    return request.param, ode(request.param)


@pytest.fixture
def xyp() -> Chart:
    return Chart(1, ode_coords(1))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, verdict_line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(verdict_line(k))
