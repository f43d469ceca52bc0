"""Suite orchestration: run the checks selected by a spec and collect one report.

Checks run sequentially and are reported in declaration order.  A failed
``validate`` turns every later check into SKIP, since nothing downstream
is defined for an invalid geometry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .bgg import Unsupported, check_bgg, check_distinguished_vanishing, find_distinguished, is_distinguished
from .expr import gcd_mode
from .geometry import validate
from .schouten import (
    check_density_transform,
    check_partial_invariance,
    check_schouten,
    check_schouten_distinguished,
    check_schouten_transform,
    check_schouten_well_defined,
)
from .specfile import SUITES, GeometrySpec, expand_suites
from .tractor import (
    check_change_laws,
    check_connection_laws,
    check_invariant_op,
    check_splitting_operators,
    check_tractor_flatness,
    check_tractor_invariance,
)
from .verify import FAIL, CheckReport, ZeroTest, zero_test_policy
from .weyl import build, check_characterization, check_scale_transform, check_tors_curv, check_trace_identities

# Check ids per suite, in report order.
SUITE_CHECKS: dict[str, tuple[str, ...]] = {
    "validate": ("geometry.validate",),
    "weyl": ("weyl.characterization", "weyl.tors_curv", "weyl.trace_identities", "weyl.scale_transform"),
    "bgg": ("bgg.operators",),
    "distinguished": ("bgg.find_distinguished", "bgg.distinguished_vanishing", "schouten.distinguished"),
    "schouten": (
        "schouten.structure",
        "schouten.well_defined",
        "schouten.density_transform",
        "schouten.partial_invariance",
        "schouten.transform",
    ),
    "tractor": (
        "tractor.invariance",
        "tractor.change_laws",
        "tractor.connection_laws",
        "tractor.splitting",
        "tractor.curvature",
    ),
    "invariant-op": ("tractor.invariant_op",),
}


@dataclass
class Report:
    """Ordered check reports of one run."""

    checks: list[CheckReport] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.checks:
            out[c.status] = out.get(c.status, 0) + 1
        return out

    def records(self) -> list[dict]:
        return [
            {"id": c.id, "status": c.status, "witness": c.witness, "millis": round(c.millis, 3)} for c in self.checks
        ]

    def json_lines(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())

    def table(self) -> str:
        width = max([len(c.id) for c in self.checks] + [5])
        lines = [f"{'check':<{width}}  {'status':<11}  {'ms':>9}  witness"]
        for c in self.checks:
            lines.append(f"{c.id:<{width}}  {c.status:<11}  {c.millis:9.1f}  {c.witness or ''}".rstrip())
        summary = ", ".join(f"{k} {v}" for k, v in sorted(self.counts().items()))
        lines.append(f"{len(self.checks)} checks: {summary}")
        return "\n".join(lines)


def _guard(check_id: str, coords, fn: Callable[[], CheckReport]) -> CheckReport:
    """Run one check; unsupported inputs and module errors become report entries."""
    try:
        rep = fn()
    except Unsupported as exc:
        rep = CheckReport(check_id, coords)
        rep.unsupported = str(exc)
        return rep.finish()
    except (ArithmeticError, ValueError) as exc:
        rep = CheckReport(check_id, coords)
        rep.true("raised", False, f"{type(exc).__name__}: {exc}")
        return rep.finish()
    rep.id = check_id
    return rep


def _skipped(check_id: str, coords, reason: str) -> CheckReport:
    rep = CheckReport(check_id, coords)
    rep.skipped = reason
    return rep.finish()


def _validation_report(g) -> CheckReport:
    rep = CheckReport("geometry.validate", g.chart.coords)
    v = validate(g)
    rep.true("independent", v.independent, v.witnesses.get("independent", ""))
    rep.true("involutive", v.involutive, v.witnesses.get("involutive", ""))
    rep.true("levi_nondegenerate", v.levi_nondegenerate, v.witnesses.get("levi_nondegenerate", ""))
    return rep.finish()


def _second_factor(spec: GeometrySpec):
    """A second scale change for composition laws, independent of the first."""
    c = spec.chart
    return c.parse("1+" + c.coords[-1] + "^2")


class _Context:
    """Objects shared between checks of one run, built on first use."""

    def __init__(self, spec: GeometrySpec, seed: int):
        self.spec = spec
        self.seed = seed
        self.g = spec.geometry()
        self.s = spec.scale_obj()
        self.gfac = spec.gfac()
        self._w = None
        self._pair = None
        self._dist = None

    @property
    def w(self):
        if self._w is None:
            self._w = build(self.g, self.s)
        return self._w

    @property
    def pair(self):
        if self._pair is None:
            self._pair = (self.w, build(self.g, self.s.times(self.gfac)))
        return self._pair

    def distinguished(self):
        if self._dist is None:
            self._dist = build(self.g, find_distinguished(self.g))
        return self._dist

    def find_report(self) -> CheckReport:
        rep = CheckReport("bgg.find_distinguished", self.g.chart.coords)
        w = self.distinguished()
        d = is_distinguished(self.g, w.scale)
        rep.true("D(alpha0) = 0", d.distinguished)
        rep.true("dL(alpha0) = 0", d.d_alpha_zero)
        rep.note(f"scale g = {w.scale.g.format(self.g.chart.coords)}")
        return rep.finish()


def _runners(ctx: _Context) -> dict[str, Callable[[], CheckReport]]:
    g, s, gfac, seed, spec = ctx.g, ctx.s, ctx.gfac, ctx.seed, ctx.spec
    return {
        "geometry.validate": lambda: _validation_report(g),
        "weyl.characterization": lambda: check_characterization(ctx.w),
        "weyl.tors_curv": lambda: check_tors_curv(ctx.w),
        "weyl.trace_identities": lambda: check_trace_identities(ctx.w),
        "weyl.scale_transform": lambda: check_scale_transform(g, s, gfac, pair=ctx.pair),
        "bgg.operators": lambda: check_bgg(g),
        "bgg.find_distinguished": ctx.find_report,
        "bgg.distinguished_vanishing": lambda: check_distinguished_vanishing(ctx.distinguished()),
        "schouten.distinguished": lambda: check_schouten_distinguished(ctx.distinguished()),
        "schouten.structure": lambda: check_schouten(ctx.w),
        "schouten.well_defined": lambda: check_schouten_well_defined(ctx.w, gfac),
        "schouten.density_transform": lambda: check_density_transform(g, s, gfac, pair=ctx.pair),
        "schouten.partial_invariance": lambda: check_partial_invariance(g, s, gfac, pair=ctx.pair),
        "schouten.transform": lambda: check_schouten_transform(g, s, gfac, pair=ctx.pair),
        "tractor.invariance": lambda: check_tractor_invariance(g, s, gfac, spec.triples, seed, pair=ctx.pair),
        "tractor.change_laws": lambda: check_change_laws(g, s, gfac, _second_factor(spec), spec.triples, seed),
        "tractor.connection_laws": lambda: check_connection_laws(ctx.w, spec.triples, seed),
        "tractor.splitting": lambda: check_splitting_operators(g, s, gfac, seed, pair=ctx.pair),
        "tractor.curvature": lambda: check_tractor_flatness(ctx.w),
        "tractor.invariant_op": lambda: check_invariant_op(g, s, gfac, pair=ctx.pair),
    }


def planned_checks(spec: GeometrySpec, suites: Iterable[str]) -> list[str]:
    """Check ids a run will report, in order."""
    out = []
    for suite in expand_suites(suites):
        for cid in SUITE_CHECKS[suite]:
            if cid == "tractor.curvature" and not spec.expect_flat:
                continue
            out.append(cid)
    return out


def run(
    spec: GeometrySpec,
    suites: Iterable[str] | None = None,
    mode: str = "exact",
    seed: int = 0,
    trials: int = 32,
    bound: int = 100,
    gcd: str = "full",
) -> Report:
    """Run the selected suites (default: those listed in the spec)."""
    suites = spec.suites if suites is None else tuple(suites)
    policy = ZeroTest(mode, seed, trials, bound)
    ids = planned_checks(spec, suites)
    report = Report()
    with gcd_mode(gcd), zero_test_policy(policy):
        ctx = _Context(spec, seed)
        coords = ctx.g.chart.coords
        runners = _runners(ctx)
        valid = _validation_report(ctx.g)
        gate = None if valid.passed else f"geometry invalid: {valid.witness}"
        for cid in ids:
            if cid == "geometry.validate":
                report.checks.append(valid)
            elif gate is not None:
                report.checks.append(_skipped(cid, coords, gate))
            else:
                report.checks.append(_guard(cid, coords, runners[cid]))
    return report


__all__ = ["Report", "SUITES", "SUITE_CHECKS", "planned_checks", "run"]
