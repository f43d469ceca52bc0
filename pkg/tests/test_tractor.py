import random

import pytest

from pathgeom.chart import differential
from pathgeom.verify import PASS
from pathgeom.weyl import build
from pathgeom.schouten import SchoutenTensor, schouten

from pathgeom.tractor import (
    ScaleMismatchError,
    TractorTriple,
    change_splitting,
    check_change_laws,
    check_connection_laws,
    check_invariant_op,
    check_splitting_operators,
    check_tractor_flatness,
    check_tractor_invariance,
    invariant_op_D,
    random_triple,
    rel_bgg_D_nu,
    rel_bgg_D_rho,
    split_one_form,
    splitting_S_nu,
    splitting_S_rho,
    tractor_curvature,
    tractor_derivative,
    triple,
)

from conftest import ODE_FIXTURES, expr, ode, scale


def flat_w(s="1"):
    g = ode("flat")
    return build(g, scale(g, s))


def zero_P(w):
    return SchoutenTensor([[w.zero() for _ in range(w.dim)] for _ in range(w.dim)])


def same(a: TractorTriple, b: TractorTriple) -> bool:
    return all(x == y for x, y in zip(a.slots, b.slots)) and a.scale_tag.g == b.scale_tag.g


def test_split_alpha():
    w = build(ode("quad"), scale(ode("quad"), "1+x^2"))
    sp = split_one_form(w, w.alpha)
    assert sp.cE == 1 and all(v.is_zero() for v in sp.cV + sp.cQ)


def test_split_dy_and_dx_on_flat_model():
    w = flat_w()
    c = w.geometry.chart
    dy = split_one_form(w, differential(c.parse("y")))
    assert dy.cE == c.parse("p") and dy.cV[0].is_zero() and dy.cQ[0] == -1
    dx = split_one_form(w, differential(c.parse("x")))
    assert (dx.cE, dx.cV[0], dx.cQ[0]) == (1, 0, 0)


def test_constant_change_only_rebases_tau():
    w = build(ode("sys5"), scale(ode("sys5"), "1"))
    t = random_triple(w, random.Random(4))
    c = expr(w.geometry, "3")
    moved = change_splitting(t, w, c)
    assert moved.nu == t.nu and moved.rho == t.rho and moved.tau == 3 * t.tau
    assert moved.scale_tag.g == 3


def test_round_trip_and_bottom_slot():
    g = ode("quad")
    w = build(g, scale(g, "1"))
    gfac = expr(g, "1+p^2")
    wh = build(g, w.scale.times(gfac))
    t = random_triple(w, random.Random(0))
    back = change_splitting(change_splitting(t, w, gfac), wh, gfac.inverse())
    assert same(back, t)
    bottom = triple(w, [0], 0, "x*y")
    moved = change_splitting(bottom, w, gfac)
    assert moved.nu[0].is_zero() and moved.rho.is_zero() and moved.tau == expr(g, "x*y") * gfac


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
def test_change_laws(name):
    g = ode(name)
    rep = check_change_laws(g, scale(g, "1"), expr(g, "1+x^2"), expr(g, "2+p1^2" if g.n == 2 else "2+p^2"))
    assert rep.status == PASS, rep.summary()


def test_derivative_along_eta_of_middle_slot():
    w = flat_w()
    out = tractor_derivative(w, zero_P(w), 1, triple(w, [0], 1, 0))
    assert out.nu[0] == 1 and out.rho.is_zero() and out.tau.is_zero()


def test_derivative_along_xi_of_bottom_slot():
    w = flat_w()
    out = tractor_derivative(w, zero_P(w), 0, triple(w, [0], 0, 1))
    assert out.nu[0].is_zero() and out.rho == 1 and out.tau.is_zero()


def test_constant_triple_on_flat_model_has_only_algebraic_terms():
    w = flat_w()
    t = triple(w, [2], 3, 5)
    xi, eta, zeta = (tractor_derivative(w, None, A, t) for A in range(3))
    assert [x.slots for x in (xi, eta, zeta)] == [[0, 5, 0], [3, 0, 0], [-5, 0, 0]]


def test_derivative_along_combination_is_linear():
    g = ode("quad")
    w = build(g, scale(g, "1+x^2"))
    t = random_triple(w, random.Random(1))
    X = [expr(g, "x"), expr(g, "p"), expr(g, "1")]
    combo = tractor_derivative(w, None, X, t)
    parts = [tractor_derivative(w, None, A, t).scale(X[A]) for A in range(3)]
    assert same(combo, parts[0] + parts[1] + parts[2])


def test_scale_mismatch():
    g = ode("quad")
    w, wh = build(g, scale(g, "1")), build(g, scale(g, "2"))
    t = random_triple(w, random.Random(0))
    with pytest.raises(ScaleMismatchError):
        tractor_derivative(wh, None, 0, t)
    with pytest.raises(ScaleMismatchError):
        t + random_triple(wh, random.Random(0))


@pytest.mark.parametrize(
    "name, gfac",
    [
        ("flat", "7"),
        ("flat", "1+x^2"),
        ("quad", "1+x^2"),
        ("quad", "1+p^2"),
        ("lin", "1+x^2"),
        ("lin", "1+y"),
        ("sys5", "1+x^2"),
        ("sys5", "1+y1"),
    ],
)
def test_invariance(name, gfac):
    g = ode(name)
    rep = check_tractor_invariance(g, scale(g, "1"), expr(g, gfac), triples=3, seed=0)
    assert rep.status == PASS, rep.summary()


def test_invariance_detects_a_wrong_schouten_reading():
    g = ode("quad")
    w = build(g, scale(g, "1"))
    wh = build(g, w.scale.times(expr(g, "1+p^2")))
    for ww in (w, wh):
        ww.__dict__["_schouten_form-slot"] = schouten(ww, ricci="first-slot")
    rep = check_tractor_invariance(g, w.scale, expr(g, "1+p^2"), pair=(w, wh))
    assert rep.status != PASS


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
def test_connection_laws(name):
    g = ode(name)
    assert check_connection_laws(build(g, scale(g, "1+x^2"))).status == PASS


def test_splitting_of_constant_density_on_flat_model():
    w = flat_w()
    rho = expr(w.geometry, "4")
    assert splitting_S_rho(w, None, rho).slots == [0, 4, 0]
    assert rel_bgg_D_rho(w, None, rho).is_zero()
    # middle slot of nabla_xi0 S(rho) cancels by construction
    assert tractor_derivative(w, None, 0, splitting_S_rho(w, None, expr(w.geometry, "x*y+p"))).rho.is_zero()


def test_splitting_of_constant_nu_on_flat_model():
    g = ode("sys5")
    w = build(g, scale(g, "1"))
    nu = [expr(g, "2"), expr(g, "-1")]
    assert all(x.is_zero() for row in rel_bgg_D_nu(w, None, nu) for x in row)
    assert splitting_S_nu(w, None, nu)[1].is_zero()


def test_D_nu_is_trace_free():
    g = ode("sys5")
    w = build(g, scale(g, "1+x^2"))
    rng = random.Random(7)
    for _ in range(3):
        nu = list(random_triple(w, rng).nu)
        D = rel_bgg_D_nu(w, None, nu)
        assert (D[0][0] + D[1][1]).is_zero()


def test_D_nu_vanishes_for_n1():
    g = ode("quad")
    w = build(g, scale(g, "1+p^2"))
    assert rel_bgg_D_nu(w, None, [expr(g, "x*y*p")])[0][0].is_zero()


@pytest.mark.parametrize("name, gfac", [("flat", "1+x^2"), ("quad", "1+p^2"), ("sys5", "1+y1"), ("lin", "1+x^2")])
def test_splitting_operators_scale_independent(name, gfac):
    g = ode(name)
    rep = check_splitting_operators(g, scale(g, "1"), expr(g, gfac))
    assert rep.status == PASS, rep.summary()


def test_invariant_operator_examples():
    w = flat_w()
    g = w.geometry
    assert invariant_op_D(w, None, expr(g, "x")).is_zero()
    assert invariant_op_D(w, None, expr(g, "3")).is_zero()
    assert invariant_op_D(w, None, expr(g, "x^2")) == 2


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
def test_invariant_operator_transforms(name):
    g = ode(name)
    assert check_invariant_op(g, scale(g, "1"), expr(g, "1+x^2")).status == PASS


@pytest.mark.parametrize("s", ["1", "1+x^2", "1+p^2", "1+y"])
def test_flat_model_tractor_curvature_vanishes(s):
    assert check_tractor_flatness(flat_w(s)).status == PASS


def test_curved_geometry_has_tractor_curvature():
    g = ode("sys5")
    w = build(g, scale(g, "1"))
    t = triple(w, [0, 0], 1, 0)
    found = any(
        not x.is_zero() for A in range(w.dim) for B in range(A + 1, w.dim) for x in tractor_curvature(w, A, B, t).slots
    )
    assert found
