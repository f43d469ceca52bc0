import pytest

from pathgeom.bgg import find_distinguished
from pathgeom.verify import FAIL, PASS
from pathgeom.weyl import build

from pathgeom.schouten import (
    check_density_transform,
    check_partial_invariance,
    check_schouten,
    check_schouten_distinguished,
    check_schouten_transform,
    check_schouten_well_defined,
    curvature_L,
    density_connection,
    predicted_schouten,
    schouten,
    xiE_form,
)

from conftest import ODE_FIXTURES, expr, ode, scale

TRANSFORM_CASES = [
    ("flat", "7"),
    ("flat", "1+x^2"),
    ("flat", "1+p^2"),
    ("quad", "7"),
    ("quad", "1+x^2"),
    ("quad", "1+p^2"),
    ("lin", "1+y"),
    ("sys5", "1+y1"),
    ("sys5", "1+x^2"),
    ("sys5", "1+p1*p2"),
]


def test_flat_density_connection_vanishes():
    g = ode("flat")
    gam = density_connection(build(g, scale(g, "1")))
    assert gam.gammaL.is_zero()
    assert all(v.is_zero() for v in gam.on_frame)


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
def test_constant_scale_has_no_E_contribution(name):
    g = ode(name)
    assert all(v.is_zero() for v in xiE_form(build(g, scale(g, "3"))))


def test_density_curvature_is_d_of_connection_form():
    g = ode("quad")
    w = build(g, scale(g, "1+p^2"))
    gam = density_connection(w)
    RL = curvature_L(w)
    f = w.frame.fields
    for A in range(3):
        for B in range(3):
            assert RL[A][B] == gam.curvature(f[A], f[B])


@pytest.mark.parametrize("name, gfac", [("flat", "7"), ("flat", "1+x^2"), ("sys5", "1+y1"), ("quad", "1+p^2")])
def test_density_transform(name, gfac):
    g = ode(name)
    assert check_density_transform(g, scale(g, "1"), expr(g, gfac)).status == PASS


@pytest.mark.parametrize("name, gfac", [("flat", "5"), ("flat", "1+x^2"), ("quad", "1+p^2"), ("sys5", "1+y1")])
def test_partial_invariance(name, gfac):
    g = ode(name)
    assert check_partial_invariance(g, scale(g, "1"), expr(g, gfac)).status == PASS


@pytest.mark.parametrize("s", ["1", "7"])
def test_flat_model_schouten_vanishes(s):
    g = ode("flat")
    P = schouten(build(g, scale(g, s))).P
    assert all(x.is_zero() for row in P for x in row)


@pytest.mark.parametrize("s", ["1+x^2", "1+y", "1+p^2"])
def test_flat_model_schouten_in_other_scales_is_predicted(s):
    g = ode("flat")
    w = build(g, scale(g, "1"))
    P = schouten(build(g, scale(g, s))).P
    assert any(not x.is_zero() for row in P for x in row)
    assert check_schouten_transform(g, w.scale, expr(g, s)).status == PASS


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
@pytest.mark.parametrize("s", ["1", "1+x^2"])
def test_structural_relation(name, s):
    g = ode(name)
    w = build(g, scale(g, s))
    P = schouten(w).P
    for a in w.V:
        assert (P[0][a] + 2 * P[a][0]).is_zero()
    assert check_schouten(w).status == PASS
    assert check_schouten_well_defined(w, expr(g, "1+x^2")).status == PASS


def test_n1_schouten_is_flagged():
    g = ode("quad")
    assert schouten(build(g, scale(g, "1"))).notes


@pytest.mark.parametrize("name", list(ODE_FIXTURES))
def test_distinguished_scale_kills_V_by_H(name):
    g = ode(name)
    w = build(g, find_distinguished(g))
    assert check_schouten_distinguished(w).status == PASS
    P = schouten(w).P
    for a in w.V:
        assert P[0][a].is_zero()


def test_distinguished_check_rejects_other_scales():
    g = ode("quad")
    with pytest.raises(ValueError):
        check_schouten_distinguished(build(g, scale(g, "1+p^2")))


@pytest.mark.parametrize("name, gfac", TRANSFORM_CASES)
def test_transform_law(name, gfac):
    g = ode(name)
    rep = check_schouten_transform(g, scale(g, "1"), expr(g, gfac))
    assert rep.status == PASS, rep.summary()


def test_constant_factor_keeps_schouten():
    g = ode("sys5")
    w = build(g, scale(g, "1+x^2"))
    wc = build(g, scale(g, "7+7*x^2"))
    P, Pc = schouten(w).P, schouten(wc).P
    # P is a (0,2)-tensor, so it picks up one factor 7 per xi0 or zeta slot
    weight = [1] + [0] * w.n + [1] * w.n
    for A in range(w.dim):
        for B in range(w.dim):
            assert Pc[A][B] == P[A][B] * 7 ** (weight[A] + weight[B])
    pred = predicted_schouten(w, expr(g, "7"))
    assert all(x == y for r, s in zip(pred, P) for x, y in zip(r, s))


def test_literal_ricci_reading_fails_the_transform_law():
    # The opposite contraction of the curvature is internally inconsistent:
    # with a gfac that varies along V it breaks the transformation law.
    g = ode("quad")
    rep = check_schouten_transform(g, scale(g, "1"), expr(g, "1+p^2"), ricci="first-slot")
    assert rep.status == FAIL
    assert check_schouten_transform(g, scale(g, "1"), expr(g, "1+p^2")).status == PASS


def test_literal_ricci_reading_agrees_when_df_lives_on_E():
    g = ode("quad")
    rep = check_schouten_transform(g, scale(g, "1"), expr(g, "1+x^2"), ricci="first-slot")
    assert rep.status == PASS


def test_unknown_ricci_convention():
    g = ode("flat")
    with pytest.raises(ValueError):
        schouten(build(g, scale(g, "1")), ricci="bogus")
