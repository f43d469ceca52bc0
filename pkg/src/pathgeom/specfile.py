"""Geometry spec files.

A spec file is TOML with three sections::

    [geometry]
    mode = "ode"            # or "frames"
    n = 1
    F = ["p^2"]             # ode mode: right-hand sides
    # frames mode instead: coords = [...], E = [...], V = [[...], ...]

    [scale]
    scale = "1"
    scale_change = "1+x^2"

    [checks]
    suites = ["all"]
    expect_flat = false     # also require vanishing tractor curvature
    triples = 3             # random tractor triples per invariance check

Errors carry a 1-based line and column where they can be located.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .chart import Chart
from .expr import ParseError, RatExpr
from .geometry import ODESystem, PathGeometry, from_ode, ode_coords
from .weyl import Scale

SUITES = ("validate", "weyl", "bgg", "distinguished", "schouten", "tractor", "invariant-op")

_KEYS = {
    "geometry": {"mode", "n", "F", "coords", "E", "V"},
    "scale": {"scale", "scale_change"},
    "checks": {"suites", "expect_flat", "triples"},
}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class SpecError(ValueError):
    """Invalid spec file; ``line`` and ``column`` are 1-based or ``None``."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class GeometrySpec:
    mode: str
    n: int
    coords: tuple[str, ...]
    F: tuple[str, ...] = ()
    E: tuple[str, ...] = ()
    V: tuple[tuple[str, ...], ...] = ()
    scale: str = "1"
    scale_change: str = "1+x^2"
    suites: tuple[str, ...] = SUITES
    expect_flat: bool = False
    triples: int = 3
    source: str | None = None
    _parsed: dict = field(default_factory=dict, repr=False)

    @property
    def chart(self) -> Chart:
        return Chart(self.n, self.coords)

    def expr(self, text: str) -> RatExpr:
        return self.chart.parse(text)

    def geometry(self) -> PathGeometry:
        if "geometry" not in self._parsed:
            if self.mode == "ode":
                g = from_ode(ODESystem(self.n, tuple(self.F)))
            else:
                c = self.chart
                g = PathGeometry(c, c.field(list(self.E)), [c.field(list(v)) for v in self.V])
            self._parsed["geometry"] = g
        return self._parsed["geometry"]

    def scale_obj(self) -> Scale:
        return Scale(self.expr(self.scale))

    def gfac(self) -> RatExpr:
        return self.expr(self.scale_change)


class _Locator:
    """Find where a key or a quoted string sits in the source text."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def key(self, section: str, key: str) -> int | None:
        current = None
        for i, raw in enumerate(self.lines, 1):
            line = raw.strip()
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
            elif current == section and re.match(rf"{re.escape(key)}\s*=", line):
                return i
        return None

    def string(self, section: str, key: str, value: str) -> tuple[int | None, int | None]:
        start = self.key(section, key)
        if start is None:
            return None, None
        for i in range(start - 1, len(self.lines)):
            for quote in ('"', "'"):
                col = self.lines[i].find(quote + value + quote)
                if col >= 0:
                    return i + 1, col + 2
        return start, None


def _fail(loc: _Locator, section: str, key: str, message: str) -> SpecError:
    return SpecError(message, loc.key(section, key), 1 if loc.key(section, key) else None)


def _expr(chart: Chart, loc: _Locator, section: str, key: str, text) -> str:
    if not isinstance(text, str):
        raise _fail(loc, section, key, f"{key}: expected a quoted expression, got {text!r}")
    try:
        chart.parse(text)
    except ParseError as exc:
        line, col = loc.string(section, key, text)
        raise SpecError(f"{key}: {exc.message} in {text!r}", line, None if col is None else col + exc.pos) from exc
    return text


def parse_spec(text: str, source: str | None = None) -> GeometrySpec:
    """Parse and validate spec text; every expression is parsed against the chart."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
        raise SpecError(getattr(exc, "msg", str(exc)), line, col) from exc
    loc = _Locator(text)
    for section, body in data.items():
        if section not in _KEYS:
            raise SpecError(f"unknown section [{section}]")
        if not isinstance(body, dict):
            raise _fail(loc, "", section, f"{section} must be a section")
        for key in body:
            if key not in _KEYS[section]:
                raise _fail(loc, section, key, f"unknown key {key!r} in [{section}]")
    geo = data.get("geometry")
    if geo is None:
        raise SpecError("missing [geometry] section")
    mode = geo.get("mode", "ode")
    if mode not in ("ode", "frames"):
        raise _fail(loc, "geometry", "mode", f"mode must be 'ode' or 'frames', got {mode!r}")
    n = geo.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise _fail(loc, "geometry", "n", f"n must be a positive integer, got {n!r}")
    dim = 2 * n + 1

    if mode == "ode":
        for key in ("coords", "E", "V"):
            if key in geo:
                raise _fail(loc, "geometry", key, f"{key} is only allowed in frames mode")
        coords = ode_coords(n)
        F = geo.get("F")
        if not isinstance(F, list) or len(F) != n:
            raise _fail(loc, "geometry", "F", f"F must list {n} right-hand side(s)")
        chart = Chart(n, coords)
        spec = GeometrySpec(mode, n, coords, F=tuple(_expr(chart, loc, "geometry", "F", f) for f in F))
    else:
        if "F" in geo:
            raise _fail(loc, "geometry", "F", "F is only allowed in ode mode")
        coords = geo.get("coords")
        if not isinstance(coords, list) or len(coords) != dim:
            raise _fail(loc, "geometry", "coords", f"coords must list {dim} names for n = {n}")
        if len(set(coords)) != dim or not all(isinstance(c, str) and _IDENT.match(c) for c in coords):
            raise _fail(loc, "geometry", "coords", "coords must be distinct identifiers")
        chart = Chart(n, tuple(coords))
        E = geo.get("E")
        if not isinstance(E, list) or len(E) != dim:
            raise _fail(loc, "geometry", "E", f"E must have {dim} components")
        V = geo.get("V")
        if not isinstance(V, list) or len(V) != n or any(not isinstance(v, list) or len(v) != dim for v in V):
            raise _fail(loc, "geometry", "V", f"V must list {n} vector(s) of {dim} components")
        spec = GeometrySpec(
            mode,
            n,
            tuple(coords),
            E=tuple(_expr(chart, loc, "geometry", "E", e) for e in E),
            V=tuple(tuple(_expr(chart, loc, "geometry", "V", e) for e in v) for v in V),
        )

    sc = data.get("scale", {})
    spec.scale = _expr(chart, loc, "scale", "scale", sc.get("scale", "1"))
    default_change = "1+x^2" if "x" in chart.coords else "1+" + chart.coords[0] + "^2"
    spec.scale_change = _expr(chart, loc, "scale", "scale_change", sc.get("scale_change", default_change))
    for key in ("scale", "scale_change"):
        if chart.parse(getattr(spec, key)).is_zero():
            raise _fail(loc, "scale", key, f"{key} must be nonzero")

    checks = data.get("checks", {})
    suites = checks.get("suites", ["all"])
    if isinstance(suites, str):
        suites = [suites]
    if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
        raise _fail(loc, "checks", "suites", "suites must be a list of names")
    try:
        spec.suites = expand_suites(suites)
    except ValueError as exc:
        raise _fail(loc, "checks", "suites", str(exc)) from exc
    flat = checks.get("expect_flat", False)
    if not isinstance(flat, bool):
        raise _fail(loc, "checks", "expect_flat", "expect_flat must be true or false")
    spec.expect_flat = flat
    triples = checks.get("triples", 3)
    if not isinstance(triples, int) or isinstance(triples, bool) or triples < 1:
        raise _fail(loc, "checks", "triples", "triples must be a positive integer")
    spec.triples = triples
    spec.source = source
    return spec


def expand_suites(names) -> tuple[str, ...]:
    """Normalize suite names to declaration order; ``all`` selects every suite."""
    chosen = set()
    for name in names:
        if name == "all":
            chosen.update(SUITES)
        elif name in SUITES:
            chosen.add(name)
        else:
            raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    return tuple(s for s in SUITES if s in chosen)


def load_spec(path) -> GeometrySpec:
    """Read and validate a spec file.  ``OSError`` propagates for unreadable paths."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_spec(text, str(path))
