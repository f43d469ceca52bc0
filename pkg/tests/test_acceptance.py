"""Acceptance suite: nine criteria, all exact.

Run ``pytest tests/test_acceptance.py`` (the verdict lines appear in the
terminal summary) or ``python tests/test_acceptance.py`` for just the lines.
"""

from __future__ import annotations

import random
import sys
import warnings
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from pathgeom.bgg import D_op, HStarSection, check_bgg, check_distinguished_vanishing, find_distinguished, is_distinguished  # noqa: E402
from pathgeom.schouten import (  # noqa: E402
    check_density_transform,
    check_partial_invariance,
    check_schouten,
    check_schouten_distinguished,
    check_schouten_transform,
    schouten,
)
from pathgeom.tractor import (  # noqa: E402
    check_change_laws,
    check_connection_laws,
    check_invariant_op,
    check_splitting_operators,
    check_tractor_flatness,
    check_tractor_invariance,
)
from pathgeom.verify import ZeroTest, zero_test_policy  # noqa: E402
from pathgeom.weyl import (  # noqa: E402
    build,
    check_characterization,
    check_scale_transform,
    check_tors_curv,
    check_trace_identities,
)

from conftest import ODE_FIXTURES, expr, ode, scale  # noqa: E402
from properties import run_property, zero_test_corpus, zero_tests_agree  # noqa: E402

FIXTURES = list(ODE_FIXTURES)
SCALES = ("1", "1+x^2")
RESULTS: dict[int, tuple[bool, str]] = {}

TITLES = {
    1: "Weyl structure characterization",
    2: "torsion/curvature and trace identities",
    3: "BGG operators and distinguished scales",
    4: "scale transformation laws",
    5: "Schouten tensor",
    6: "tractor bundle and connection",
    7: "invariant second order operator",
    8: "flat tractor curvature (non-blocking)",
    9: "CAS property suites and zero tests",
}


class Tally:
    """Collects reports; the criterion holds iff every report passed."""

    def __init__(self):
        self.count = 0
        self.failed: list[str] = []

    def add(self, label: str, rep) -> None:
        self.count += 1
        if not rep.passed:
            self.failed.append(f"{label}: {rep.summary()}")

    def expect(self, label: str, cond: bool) -> None:
        self.count += 1
        if not cond:
            self.failed.append(label)

    def verdict(self) -> tuple[bool, str]:
        if self.failed:
            return False, f"{len(self.failed)} of {self.count} failed; first: {self.failed[0]}"
        return True, f"{self.count} checks exact"


def criterion_1() -> Tally:
    t = Tally()
    for name in FIXTURES:
        g = ode(name)
        for s in SCALES:
            t.add(f"{name} g={s}", check_characterization(build(g, scale(g, s))))
    return t


def criterion_2() -> Tally:
    t = Tally()
    for name in FIXTURES:
        g = ode(name)
        for s in SCALES:
            w = build(g, scale(g, s))
            t.add(f"{name} g={s} tors-curv", check_tors_curv(w))
            t.add(f"{name} g={s} traces", check_trace_identities(w))
    return t


def criterion_3() -> Tally:
    t = Tally()
    for name in FIXTURES:
        g = ode(name)
        s = find_distinguished(g)
        t.expect(f"{name} distinguished scale is 1", s.g == 1)
        d = is_distinguished(g, s)
        t.expect(f"{name} certified", d.distinguished and d.d_alpha_zero)
        t.add(f"{name} L/D and closedness", check_bgg(g, [expr(g, "1+x^2")]))
        t.add(f"{name} distinguished vanishing", check_distinguished_vanishing(build(g, s)))
    g = ode("sys5")
    for aE in ("1", "x", "1+y1^2", "p1*p2+x"):
        S = D_op(g, HStarSection.of_E(g, expr(g, aE)), check_symmetry=False).S
        t.expect(f"sys5 D symmetric for {aE}", S[0][1] == S[1][0])
    return t


def criterion_4() -> Tally:
    t = Tally()
    cases = [(name, f) for name in ("flat", "quad") for f in ("7", "1+x^2", "1+p^2")] + [("sys5", "1+y1")]
    for name, f in cases:
        g = ode(name)
        s, gfac = scale(g, "1"), expr(g, f)
        pair = (build(g, s), build(g, s.times(gfac)))
        t.add(f"{name} gfac={f} Weyl laws", check_scale_transform(g, s, gfac, pair=pair))
        t.add(f"{name} gfac={f} density connection", check_density_transform(g, s, gfac, pair=pair))
        t.add(f"{name} gfac={f} partial invariance", check_partial_invariance(g, s, gfac, pair=pair))
        t.add(f"{name} gfac={f} Schouten law", check_schouten_transform(g, s, gfac, pair=pair))
    return t


def criterion_5() -> Tally:
    t = Tally()
    g = ode("flat")
    P = schouten(build(g, scale(g, "1"))).P
    t.expect("flat P = 0", all(x.is_zero() for row in P for x in row))
    for name in FIXTURES:
        g = ode(name)
        for s in SCALES:
            t.add(f"{name} g={s} structure", check_schouten(build(g, scale(g, s))))
        t.add(f"{name} distinguished", check_schouten_distinguished(build(g, find_distinguished(g))))
    return t


def criterion_6() -> Tally:
    t = Tally()
    for name in FIXTURES:
        g = ode(name)
        s, gfac = scale(g, "1"), expr(g, "1+x^2")
        pair = (build(g, s), build(g, s.times(gfac)))
        t.add(f"{name} invariance", check_tractor_invariance(g, s, gfac, triples=3, seed=0, pair=pair))
        second = expr(g, "2+p^2" if g.n == 1 else "2+p1^2")
        t.add(f"{name} change laws", check_change_laws(g, s, gfac, second, triples=3))
        t.add(f"{name} connection laws", check_connection_laws(pair[0], triples=3))
        t.add(f"{name} splitting operators", check_splitting_operators(g, s, gfac, pair=pair))
    return t


def criterion_7() -> Tally:
    t = Tally()
    for name in FIXTURES:
        g = ode(name)
        t.add(name, check_invariant_op(g, scale(g, "1"), expr(g, "1+x^2")))
    return t


def criterion_8() -> Tally:
    t = Tally()
    g = ode("flat")
    for s in SCALES + ("1+p^2", "1+y"):
        t.add(f"flat g={s}", check_tractor_flatness(build(g, scale(g, s))))
    return t


def criterion_9() -> Tally:
    t = Tally()
    for prop in ("leibniz", "jacobi", "idempotence", "eval"):
        bad = run_property(prop, cases=1000, seed=0)
        t.expect(f"{prop}: {bad} of 1000 cases failed", bad == 0)
    agree, total = zero_tests_agree(zero_test_corpus(random.Random(0), 1000), seed=0)
    t.expect(f"zero tests agree on {agree} of {total}", agree == total == 1000)
    return t


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 10)}
NON_BLOCKING = {8}


def evaluate(k: int) -> tuple[bool, str]:
    with zero_test_policy(ZeroTest("exact")):
        ok, detail = CRITERIA[k]().verdict()
    RESULTS[k] = (ok, detail)
    return ok, detail


def verdict_line(k: int) -> str:
    ok, detail = RESULTS[k]
    return f"criterion {k} ({TITLES[k]}): {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = evaluate(k)
    print(verdict_line(k))
    if k in NON_BLOCKING:
        if not ok:
            warnings.warn(f"non-blocking criterion {k} failed: {detail}")
        return
    assert ok, detail


if __name__ == "__main__":
    failed = False
    for k in sorted(CRITERIA):
        ok, _ = evaluate(k)
        print(verdict_line(k), flush=True)
        failed |= not ok and k not in NON_BLOCKING
    sys.exit(1 if failed else 0)
