"""Density bundle connections and the Schouten tensor of a Weyl structure.

Sections of the density bundle ``L`` are stored as coefficients against the
scale-independent reference ``lambda_ref = (xiE (x) omega_ref)^(1/(n+2))``,
where ``omega_ref`` is dual to ``eta_1 ^ .. ^ eta_n``.  A Weyl structure
then acts by ``nabla_X rho = X(rho) + gammaL(X) rho``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .chart import OneForm, d_exterior, differential, lie_bracket
from .expr import RatExpr
from .geometry import PathGeometry
from .verify import CheckReport
from .weyl import Scale, WeylStructure, build, lazy_curvature, lazy_torsion, log_differential


@dataclass(frozen=True)
class DensitySection:
    """Section of ``L`` by its coefficient against ``lambda_ref``."""

    coeff: RatExpr


@dataclass(frozen=True)
class DensityConnectionForm:
    """Connection form of the induced connection on ``L`` relative to ``lambda_ref``."""

    gammaL: OneForm
    on_frame: tuple[RatExpr, ...]

    def curvature(self, X, Y) -> RatExpr:
        """``R^L(X, Y) = d(gammaL)(X, Y)``."""
        return d_exterior(self.gammaL, X, Y)


def xiE_form(w: WeylStructure) -> list[RatExpr]:
    """``a(e_A)`` with ``nabla_{e_A} xiE = a(e_A) xiE``; equals ``-e_A(g)/g``."""
    g = w.scale.g
    ginv = g.inverse()
    return [-(w.derive(A, g) * ginv) for A in range(w.dim)]


def density_connection(w: WeylStructure) -> DensityConnectionForm:
    """``gammaL = (a + b) / (n + 2)`` with ``b(e_A) = -trace`` of the ``V``-block of ``Gamma``."""
    cached = w.__dict__.get("_density")
    if cached is not None:
        return cached
    n = w.n
    a = xiE_form(w)
    k = RatExpr.const(w.nvars, 1) / (n + 2)
    vals = []
    for A in range(w.dim):
        tr = w.zero()
        for b in w.V:
            tr = tr + w.Gamma[A][b][b]
        vals.append((a[A] - tr) * k)
    comps = [w.zero()] * w.dim
    for A, v in enumerate(vals):
        if v:
            comps = [c + v * t for c, t in zip(comps, w.frame.coframe[A])]
    out = DensityConnectionForm(OneForm(comps), tuple(vals))
    w.__dict__["_density"] = out
    return out


def nabla_density(w: WeylStructure, A: int, rho: RatExpr, weight: int = 1) -> RatExpr:
    """``nabla_{e_A}`` of a section of ``L^weight`` given by its coefficient."""
    gam = density_connection(w).on_frame[A]
    return w.derive(A, rho) + gam * rho * weight


def curvature_L(w: WeylStructure) -> list[list[RatExpr]]:
    """``R^L(e_A, e_B)`` computed in the frame as ``d(gammaL)``."""
    cached = w.__dict__.get("_RL")
    if cached is not None:
        return cached
    gam = density_connection(w).on_frame
    c = w.structure
    dim = w.dim
    R = [[w.zero() for _ in range(dim)] for _ in range(dim)]
    for A in range(dim):
        for B in range(A + 1, dim):
            v = w.derive(A, gam[B]) - w.derive(B, gam[A])
            for C in range(dim):
                if c[A][B][C] and gam[C]:
                    v = v - c[A][B][C] * gam[C]
            R[A][B] = v
            R[B][A] = -v
    w.__dict__["_RL"] = R
    return R


def random_polynomial(nvars: int, rng: random.Random, degree: int = 2, terms: int = 4) -> RatExpr:
    """A small random polynomial with integer coefficients in ``[-5, 5]``."""
    acc = RatExpr.zero(nvars)
    for _ in range(terms):
        c = rng.randint(-5, 5)
        mono = RatExpr.const(nvars, c)
        for _ in range(rng.randint(0, degree)):
            mono = mono * RatExpr.var(nvars, rng.randrange(nvars))
        acc = acc + mono
    if acc.is_zero():
        acc = RatExpr.const(nvars, 1)
    return acc


def _pair(g: PathGeometry, s: Scale, gfac: RatExpr, pair=None):
    if gfac.is_zero():
        raise ValueError("scale factor must be nonzero")
    if pair is not None:
        return pair
    return build(g, s), build(g, s.times(gfac))


def check_density_transform(
    g: PathGeometry, s: Scale, gfac: RatExpr, rho: RatExpr | None = None, pair=None
) -> CheckReport:
    """Change of the induced connection on ``L`` under ``xi0 -> gfac * xi0``."""
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("schouten.density_transform", g.chart.coords)
    if rho is None:
        rho = random_polynomial(g.dim, random.Random(0))
    n = g.n
    half = RatExpr.const(g.dim, 1) / 2
    df = w.on_frame(log_differential(gfac))
    gh = density_connection(wh).gammaL
    for A in range(w.dim):
        X = w.frame.fields[A]
        new = X(rho) + gh(X) * rho
        old = nabla_density(w, A, rho)
        if A == 0:
            pred = -half * df[0] * rho
        elif A <= n:
            pred = -df[A] * rho
        else:
            pred = -half * df[0] * df[A - n] * rho
        rep.equal(f"nabla^_{w.label(A)} rho", new - old, pred)
    return rep.finish()


def check_partial_invariance(g: PathGeometry, s: Scale, gfac: RatExpr, sigma: RatExpr | None = None, pair=None) -> CheckReport:
    """``E* (x) L`` has a scale-independent derivative along ``V``; ``E* (x) L^2`` along ``E``.

    Sections are coefficients against ``epsilon_ref (x) lambda_ref^k`` with
    ``epsilon_ref`` dual to ``xiE``; the connection form is ``-a + k gammaL``.
    """
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("schouten.partial_invariance", g.chart.coords)
    if sigma is None:
        sigma = random_polynomial(g.dim, random.Random(1))
    gam, gamh = density_connection(w).gammaL, density_connection(wh).gammaL
    a = OneForm(-c for c in differential(w.scale.g).comps) * w.scale.g.inverse()
    ah = OneForm(-c for c in differential(wh.scale.g).comps) * wh.scale.g.inverse()

    def deriv(X, form_a, form_g, k):
        return X(sigma) + (form_g(X) * k - form_a(X)) * sigma

    for eta_i, eta in enumerate(g.etas):
        rep.equal(f"E*L along eta{eta_i + 1}", deriv(eta, ah, gamh, 1), deriv(eta, a, gam, 1))
    for label, X in (("xiE", g.xiE), ("xi0", w.xi0)):
        rep.equal(f"E*L^2 along {label}", deriv(X, ah, gamh, 2), deriv(X, a, gam, 2))
    return rep.finish()


@dataclass
class SchoutenTensor:
    """``P[A][B] = P(e_A, e_B)`` in the adapted frame of the Weyl structure."""

    P: list[list[RatExpr]]
    notes: list[str] = field(default_factory=list)

    def value(self, w: WeylStructure, X: Sequence[RatExpr], Y: Sequence[RatExpr]) -> RatExpr:
        """``P(X, Y)`` for adapted components ``X``, ``Y``."""
        acc = w.zero()
        for A, x in enumerate(X):
            if not x:
                continue
            for B, y in enumerate(Y):
                if y and self.P[A][B]:
                    acc = acc + x * y * self.P[A][B]
        return acc


def nabla_P(w: WeylStructure, P: list[list[RatExpr]], X: Sequence[RatExpr], Y: Sequence[RatExpr], Z: Sequence[RatExpr]) -> RatExpr:
    """``(nabla_X P)(Y, Z)`` with all arguments in adapted components."""
    tens = SchoutenTensor(P)
    val = w.derive_along(X, tens.value(w, Y, Z))
    return val - tens.value(w, w.nabla_comps(X, Y), Z) - tens.value(w, Y, w.nabla_comps(X, Z))


RICCI_CONVENTIONS = ("form-slot", "first-slot")


def ricci_V(w: WeylStructure, A: int, b: int, convention: str = "form-slot") -> RatExpr:
    """Ricci-type contraction of the ``V``-curvature at ``(e_A, eta_b)``.

    ``form-slot`` traces ``eta -> R(e_A, eta) eta_b``; ``first-slot`` traces
    ``eta -> R(eta, e_A) eta_b`` and differs by a sign.  Only ``form-slot``
    yields a tractor connection that is flat on the flat model in every
    scale and scale-invariant in general.
    """
    if convention not in RICCI_CONVENTIONS:
        raise ValueError(f"unknown Ricci convention {convention!r}")
    R = lazy_curvature(w)
    acc = w.zero()
    for a in w.V:
        acc = acc + (R(A, a, b)[a] if convention == "form-slot" else R(a, A, b)[a])
    return acc


def schouten(w: WeylStructure, ricci: str = "form-slot") -> SchoutenTensor:
    """Schouten tensor, computed block by block: ``H x H``, mixed, ``iota(Q) x iota(Q)``.

    For ``n = 1`` the ``V x V`` entry uses the value ``Ric / (n - 1)`` takes
    identically for ``n > 1``, namely ``-alpha([eta_a, zeta_b])`` (with the
    sign of the chosen convention); the report notes carry a flag.
    """
    key = f"_schouten_{ricci}"
    cached = w.__dict__.get(key)
    if cached is not None:
        return cached
    if ricci not in RICCI_CONVENTIONS:
        raise ValueError(f"unknown Ricci convention {ricci!r}")
    sign = 1 if ricci == "form-slot" else -1
    n, dim, nv = w.n, w.dim, w.nvars
    T = lazy_torsion(w)
    RL = curvature_L(w)
    P = [[w.zero() for _ in range(dim)] for _ in range(dim)]
    notes = []
    one = RatExpr.one(nv)
    half = one / 2
    # H x H
    tr = w.zero()
    for a in range(n):
        tr = tr + T[0][w.zeta_index(a)][w.eta_index(a)]
    P[0][0] = -tr / n
    for a in w.V:
        P[0][a] = ricci_V(w, 0, a, ricci) * RatExpr.const(nv, 2) / (2 * n + 1)
        P[a][0] = -half * P[0][a]
    for a in w.V:
        for b in w.V:
            if n > 1:
                P[a][b] = ricci_V(w, a, b, ricci) / (n - 1)
            else:
                zb = w.frame.fields[w.zeta_index(b - 1)]
                P[a][b] = -sign * w.alpha(lie_bracket(w.frame.fields[a], zb))
    if n == 1:
        notes.append("n=1: P(eta, eta) uses -alpha([eta, zeta]), the value of Ric/(n-1) for n > 1")
    # mixed blocks
    for a in range(n):
        za = w.zeta_index(a)
        for b in w.V:
            P[za][b] = -RL[za][b]
            P[b][za] = RL[za][b]
        ea = w.eta_index(a)
        xi = w.unit(0)
        S = nabla_P(w, P, xi, w.unit(ea), xi) - nabla_P(w, P, w.unit(ea), xi, xi)
        P[za][0] = (S - RL[za][0]) * half
        P[0][za] = (S + RL[za][0]) * half
    # iota(Q) x iota(Q)
    for a in range(n):
        za, ea = w.zeta_index(a), w.eta_index(a)
        for b in range(n):
            zb, eb = w.zeta_index(b), w.eta_index(b)
            xi = w.unit(0)
            v = nabla_P(w, P, w.unit(za), w.unit(eb), xi) - nabla_P(w, P, w.unit(eb), w.unit(za), xi)
            v = v - P[0][0] * P[ea][eb] + P[ea][0] * P[eb][0]
            P[za][zb] = v
    out = SchoutenTensor(P, notes)
    w.__dict__[key] = out
    return out


def check_schouten(w: WeylStructure) -> CheckReport:
    """Structural relation ``P(xi0, eta) + 2 P(eta, xi0) = 0`` and the mixed-block consistency."""
    rep = CheckReport("schouten.structure", w.geometry.chart.coords)
    S = schouten(w)
    P = S.P
    RL = curvature_L(w)
    for a in w.V:
        rep.zero(f"P(xi0,{w.label(a)}) + 2P({w.label(a)},xi0)", P[0][a] + 2 * P[a][0])
    for a in range(w.n):
        za, ea = w.zeta_index(a), w.eta_index(a)
        rep.equal(f"P(zeta{a + 1},xi0) - P(xi0,zeta{a + 1})", P[za][0] - P[0][za], -RL[za][0])
        for b in w.V:
            rep.equal(f"P(zeta{a + 1},{w.label(b)}) = -P({w.label(b)},zeta{a + 1})", P[za][b], -P[b][za])
    for note in S.notes:
        rep.note(note)
    return rep.finish()


def check_schouten_well_defined(w: WeylStructure, f: RatExpr) -> CheckReport:
    """The sum formula for ``P(zeta, xi0) + P(xi0, zeta)`` is unchanged under ``(xi0, eta) -> (f xi0, eta / f)``."""
    rep = CheckReport("schouten.well_defined", w.geometry.chart.coords)
    P = schouten(w).P
    finv = f.inverse()
    for a in range(w.n):
        ea = w.eta_index(a)
        xi = w.unit(0)
        xi_f = [c * f for c in xi]
        eta_f = [c * finv for c in w.unit(ea)]
        base = nabla_P(w, P, xi, w.unit(ea), xi) - nabla_P(w, P, w.unit(ea), xi, xi)
        alt = nabla_P(w, P, xi_f, eta_f, xi) - nabla_P(w, P, eta_f, xi_f, xi)
        rep.equal(f"sum formula for zeta{a + 1}", alt, base)
    return rep.finish()


def check_schouten_distinguished(w: WeylStructure) -> CheckReport:
    """For a distinguished scale ``P`` vanishes on ``V x H`` (hence also on ``H x V``)."""
    from .bgg import is_distinguished

    if not is_distinguished(w.geometry, w.scale).distinguished:
        raise ValueError("scale is not distinguished")
    rep = CheckReport("schouten.distinguished", w.geometry.chart.coords)
    P = schouten(w).P
    for a in w.V:
        for B in w.H:
            rep.zero(f"P({w.label(a)},{w.label(B)})", P[a][B])
            rep.zero(f"P({w.label(B)},{w.label(a)})", P[B][a])
    return rep.finish()


def hat_zeta(w: WeylStructure, gfac: RatExpr, a: int) -> list[RatExpr]:
    """Adapted components of ``iota^(L(xi0, eta_a))`` for the scale ``gfac * xi0``.

    ``iota^(L(xi, eta)) = iota(L(xi, eta)) - df(eta) xi - df(xi) eta / 2``.
    """
    df = w.on_frame(log_differential(gfac))
    v = w.unit(w.zeta_index(a))
    v[0] = v[0] - df[w.eta_index(a)]
    v[w.eta_index(a)] = v[w.eta_index(a)] - df[0] / 2
    return v


def predicted_schouten(w: WeylStructure, gfac: RatExpr, ricci: str = "form-slot") -> list[list[RatExpr]]:
    """Predicted ``P^(e_A, e'_B)`` for the scale ``gfac * xi0``, from ``P`` and ``df = d(gfac)/gfac``.

    ``e_A`` runs over the adapted frame of ``w``.  ``e'_B = e_B`` except that
    a ``zeta`` in the second argument is lifted with the new ``iota``:
    ``e'_{zeta_b} = iota^(L(xi0, eta_b))``, on both sides of the law.  A
    ``zeta`` in the first argument, and every ``zeta`` fed to ``df`` or
    ``nabla df``, uses the ``iota`` of ``w``.
    """
    n, nv = w.n, w.nvars
    P = schouten(w, ricci).P
    df = w.on_frame(log_differential(gfac))
    dx, de, dz = df[0], df[1 : 1 + n], df[1 + n :]
    half, quarter = RatExpr.const(nv, 1) / 2, RatExpr.const(nv, 1) / 4
    ndf = [w.nabla_form(w.unit(A), df) for A in range(w.dim)]  # ndf[X][Y] = (nabla_X df)(Y)
    ei, zi = w.eta_index, w.zeta_index

    def P2(A: int, b: int) -> RatExpr:
        # P(e_A, iota^(L(xi0, eta_b)))
        return P[A][zi(b)] - de[b] * P[A][0] - half * dx * P[A][ei(b)]

    Q = [[None] * w.dim for _ in range(w.dim)]
    Q[0][0] = P[0][0] - half * ndf[0][0] - quarter * dx * dx
    for b in range(n):
        eb = ei(b)
        Q[0][eb] = P[0][eb] + ndf[0][eb] - dx * de[b] + dz[b]
        Q[eb][0] = -half * Q[0][eb]
    for a in range(n):
        for b in range(n):
            ea, eb = ei(a), ei(b)
            Q[ea][eb] = P[ea][eb] + ndf[ea][eb] - de[a] * de[b]
    for a in range(n):
        za, ea = zi(a), ei(a)
        for b in range(n):
            eb = ei(b)
            Q[za][eb] = P[za][eb] + ndf[za][eb] + de[a] * dz[b] - dx * de[a] * de[b]
            Q[eb][za] = (
                P2(eb, a)
                - half * dx * de[a] * de[b]
                + dz[b] * de[a]
                + ndf[eb][0] * de[a]
                + half * dx * ndf[eb][ea]
                - ndf[eb][za]
            )
        Q[za][0] = P[za][0] - half * ndf[za][0] + quarter * dx * dx * de[a] - half * dx * dz[a]
        Q[0][za] = (
            P2(0, a)
            + half * dx * dx * de[a]
            - half * dx * dz[a]
            + ndf[0][0] * de[a]
            + half * dx * ndf[0][ea]
            - ndf[0][za]
        )
    for a in range(n):
        za = zi(a)
        for b in range(n):
            zb, eb = zi(b), ei(b)
            Q[za][zb] = (
                P2(za, b)
                + ndf[za][0] * de[b]
                + half * dx * ndf[za][eb]
                - ndf[za][zb]
                - half * dx * dx * de[a] * de[b]
                + half * dx * de[a] * dz[b]
                + dx * de[b] * dz[a]
                - dz[a] * dz[b]
            )
    return Q


def check_schouten_transform(g: PathGeometry, s: Scale, gfac: RatExpr, pair=None, ricci: str = "form-slot") -> CheckReport:
    """Change-of-scale law of the Schouten tensor, evaluated on the frame of ``s``."""
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("schouten.transform", g.chart.coords)
    Ph = schouten(wh, ricci)
    n = w.n
    first = [wh.components(f) for f in w.frame.fields]
    second = list(first)
    for a in range(n):
        second[w.zeta_index(a)] = wh.components(w.vector(hat_zeta(w, gfac, a)))
    Q = predicted_schouten(w, gfac, ricci)
    for A in range(w.dim):
        for B in range(w.dim):
            lab = w.label(B) + ("^" if B in w.Q else "")
            rep.equal(f"P^({w.label(A)},{lab})", Ph.value(wh, first[A], second[B]), Q[A][B])
    for note in schouten(w, ricci).notes:
        rep.note(note)
    return rep.finish()
