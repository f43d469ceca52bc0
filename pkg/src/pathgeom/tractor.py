"""Standard tractors in the splitting of a scale and the normal tractor connection.

A :class:`TractorTriple` stores ``nu`` on ``eta_a (x) lambda_ref``, ``rho`` on
``lambda_ref`` and ``tau`` on ``epsilon0 (x) lambda_ref`` where ``epsilon0``
is dual to the scale's ``xi0``.  Only the ``tau`` slot rebases when the
scale changes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .chart import OneForm
from .expr import RatExpr
from .geometry import PathGeometry
from .schouten import SchoutenTensor, density_connection, nabla_density, random_polynomial, schouten
from .verify import CheckReport
from .weyl import Scale, WeylStructure, build, log_differential


class ScaleMismatchError(ValueError):
    """A triple was used with a Weyl structure of a different scale."""


@dataclass(frozen=True)
class TractorTriple:
    nu: tuple[RatExpr, ...]
    rho: RatExpr
    tau: RatExpr
    scale_tag: Scale

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(self.nu))

    @property
    def slots(self) -> list[RatExpr]:
        return [*self.nu, self.rho, self.tau]

    def __add__(self, other: TractorTriple) -> TractorTriple:
        _same_scale(self.scale_tag, other.scale_tag)
        return TractorTriple(
            tuple(a + b for a, b in zip(self.nu, other.nu)), self.rho + other.rho, self.tau + other.tau, self.scale_tag
        )

    def __sub__(self, other: TractorTriple) -> TractorTriple:
        return self + other.scale(-RatExpr.one(self.rho.nvars))

    def scale(self, f: RatExpr) -> TractorTriple:
        """Pointwise multiple ``f * t``."""
        return TractorTriple(tuple(x * f for x in self.nu), self.rho * f, self.tau * f, self.scale_tag)


def _same_scale(a: Scale, b: Scale) -> None:
    if a.g != b.g:
        raise ScaleMismatchError("triples refer to different scales")


def _check(w: WeylStructure, t: TractorTriple) -> None:
    if len(t.nu) != w.n:
        raise ValueError(f"expected {w.n} nu components, got {len(t.nu)}")
    if w.scale.g != t.scale_tag.g:
        raise ScaleMismatchError("triple does not refer to the scale of this Weyl structure")


def triple(w: WeylStructure, nu: Sequence, rho, tau) -> TractorTriple:
    """Build a triple in the splitting of ``w`` from strings or expressions."""
    c = w.geometry.chart

    def conv(v):
        return c.parse(v) if isinstance(v, str) else (c.const(v) if isinstance(v, int) else v)

    t = TractorTriple(tuple(conv(v) for v in nu), conv(rho), conv(tau), w.scale)
    _check(w, t)
    return t


def random_triple(w: WeylStructure, rng: random.Random) -> TractorTriple:
    nv = w.nvars
    return TractorTriple(
        tuple(random_polynomial(nv, rng) for _ in range(w.n)),
        random_polynomial(nv, rng),
        random_polynomial(nv, rng),
        w.scale,
    )


@dataclass(frozen=True)
class OneFormSplit:
    """Values of a one-form on ``xi0``, on the ``eta_a`` and on the ``zeta_a``."""

    cE: RatExpr
    cV: tuple[RatExpr, ...]
    cQ: tuple[RatExpr, ...]


def split_one_form(w: WeylStructure, gamma: OneForm) -> OneFormSplit:
    v = w.on_frame(gamma)
    n = w.n
    return OneFormSplit(v[0], tuple(v[1 : 1 + n]), tuple(v[1 + n :]))


def change_splitting(t: TractorTriple, w: WeylStructure, gfac: RatExpr) -> TractorTriple:
    """The same tractor in the splitting of ``gfac * xi0``; ``d^Q f`` uses the source ``iota``."""
    _check(w, t)
    if gfac.is_zero():
        raise ValueError("scale factor must be nonzero")
    df = split_one_form(w, log_differential(gfac))
    half = RatExpr.one(w.nvars) / 2
    df_nu = w.zero()
    dq_nu = w.zero()
    for a, x in enumerate(t.nu):
        if x:
            df_nu = df_nu + df.cV[a] * x
            dq_nu = dq_nu + df.cQ[a] * x
    rho = t.rho - df_nu
    tau = t.tau + half * df.cE * t.rho + half * df.cE * df_nu - dq_nu
    return TractorTriple(t.nu, rho, tau * gfac, t.scale_tag.times(gfac))


def _frame_derivative(w: WeylStructure, P: list, A: int, t: TractorTriple) -> TractorTriple:
    n = w.n
    gam = density_connection(w).on_frame[A]
    G = w.Gamma[A]
    nu = []
    for c in range(n):
        ec = w.eta_index(c)
        v = w.derive(A, t.nu[c]) + gam * t.nu[c]
        for b in range(n):
            coef = G[w.eta_index(b)][ec]
            if coef and t.nu[b]:
                v = v + coef * t.nu[b]
        if A == ec:
            v = v + t.rho
        elif A == w.zeta_index(c):
            v = v - t.tau
        nu.append(v)
    rho = w.derive(A, t.rho) + gam * t.rho
    if A == 0:
        rho = rho + t.tau
    tau = w.derive(A, t.tau) + gam * t.tau + P[A][0] * t.rho
    for b in range(n):
        if t.nu[b]:
            rho = rho + P[A][w.eta_index(b)] * t.nu[b]
            tau = tau - P[A][w.zeta_index(b)] * t.nu[b]
    return TractorTriple(tuple(nu), rho, tau, t.scale_tag)


def tractor_derivative(
    w: WeylStructure, P: SchoutenTensor | None, direction: int | Sequence[RatExpr], t: TractorTriple
) -> TractorTriple:
    """``nabla^T`` along a frame index or along adapted components of a vector field."""
    _check(w, t)
    PP = (P or schouten(w)).P
    if isinstance(direction, int):
        return _frame_derivative(w, PP, direction, t)
    acc = None
    for A, x in enumerate(direction):
        if not x:
            continue
        term = _frame_derivative(w, PP, A, t).scale(x)
        acc = term if acc is None else acc + term
    if acc is None:
        z = w.zero()
        return TractorTriple(tuple(z for _ in range(w.n)), z, z, t.scale_tag)
    return acc


def _compare(rep: CheckReport, label: str, a: TractorTriple, b: TractorTriple) -> None:
    names = [f"nu{i + 1}" for i in range(len(a.nu))] + ["rho", "tau"]
    for name, x, y in zip(names, a.slots, b.slots):
        rep.equal(f"{label} {name}", x, y)


def _pair(g: PathGeometry, s: Scale, gfac: RatExpr, pair=None):
    if gfac.is_zero():
        raise ValueError("scale factor must be nonzero")
    if pair is not None:
        return pair
    return build(g, s), build(g, s.times(gfac))


def check_tractor_invariance(
    g: PathGeometry, s: Scale, gfac: RatExpr, triples: Sequence[TractorTriple] | int = 3, seed: int = 0, pair=None
) -> CheckReport:
    """The connections defined in the two splittings agree, along every frame direction of ``s``."""
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("tractor.invariance", g.chart.coords)
    if isinstance(triples, int):
        rng = random.Random(seed)
        triples = [random_triple(w, rng) for _ in range(triples)]
    P, Ph = schouten(w), schouten(wh)
    new_comps = [wh.components(f) for f in w.frame.fields]
    for k, t in enumerate(triples):
        th = change_splitting(t, w, gfac)
        for A in range(w.dim):
            d1 = change_splitting(tractor_derivative(w, P, A, t), w, gfac)
            d2 = tractor_derivative(wh, Ph, new_comps[A], th)
            _compare(rep, f"t{k} along {w.label(A)}", d1, d2)
    return rep.finish()


def check_change_laws(g: PathGeometry, s: Scale, g1: RatExpr, g2: RatExpr, triples: int = 3, seed: int = 0) -> CheckReport:
    """Round trip, composition, and the ``(0, 0, tau)`` rebase of the splitting change."""
    rep = CheckReport("tractor.change_laws", g.chart.coords)
    w = build(g, s)
    w1 = build(g, s.times(g1))
    rng = random.Random(seed)
    for k in range(triples):
        t = random_triple(w, rng)
        t1 = change_splitting(t, w, g1)
        back = change_splitting(t1, w1, g1.inverse())
        _compare(rep, f"t{k} round trip", TractorTriple(back.nu, back.rho, back.tau, t.scale_tag), t)
        rep.true(f"t{k} round trip scale", back.scale_tag.g == s.g)
        two = change_splitting(t1, w1, g2)
        one = change_splitting(t, w, g1 * g2)
        _compare(rep, f"t{k} composition", two, TractorTriple(one.nu, one.rho, one.tau, two.scale_tag))
        z = w.zero()
        bottom = TractorTriple(tuple(z for _ in range(w.n)), z, t.tau, t.scale_tag)
        moved = change_splitting(bottom, w, g1)
        _compare(rep, f"t{k} bottom slot", moved, TractorTriple(bottom.nu, z, t.tau * g1, moved.scale_tag))
    return rep.finish()


def check_connection_laws(w: WeylStructure, triples: int = 3, seed: int = 0) -> CheckReport:
    """Additivity, Leibniz rule, ``T^0`` preservation along ``E`` and ``tau``-independence along ``V``."""
    rep = CheckReport("tractor.connection_laws", w.geometry.chart.coords)
    P = schouten(w)
    rng = random.Random(seed)
    for k in range(triples):
        t, u = random_triple(w, rng), random_triple(w, rng)
        f = random_polynomial(w.nvars, rng)
        for A in range(w.dim):
            lab = f"t{k} along {w.label(A)}"
            _compare(
                rep,
                f"{lab} additivity",
                tractor_derivative(w, P, A, t + u),
                tractor_derivative(w, P, A, t) + tractor_derivative(w, P, A, u),
            )
            lhs = tractor_derivative(w, P, A, t.scale(f))
            rhs = t.scale(w.derive(A, f)) + tractor_derivative(w, P, A, t).scale(f)
            _compare(rep, f"{lab} Leibniz", lhs, rhs)
        t0 = TractorTriple(tuple(w.zero() for _ in range(w.n)), t.rho, t.tau, t.scale_tag)
        for a, x in enumerate(tractor_derivative(w, P, 0, t0).nu):
            rep.zero(f"t{k} T0 preserved along xi0, nu{a + 1}", x)
        t_alt = TractorTriple(t.nu, t.rho, u.tau, t.scale_tag)
        for A in w.V:
            d1, d2 = tractor_derivative(w, P, A, t), tractor_derivative(w, P, A, t_alt)
            for i, (x, y) in enumerate(zip(d1.slots[:-1], d2.slots[:-1])):
                rep.equal(f"t{k} along {w.label(A)} slot {i} independent of tau", x, y)
    return rep.finish()


# -- splitting operators and relative BGG operators ------------------------


def splitting_S_rho(w: WeylStructure, P: SchoutenTensor | None, rho: RatExpr) -> TractorTriple:
    """``S(rho) = (0, rho, -nabla_{xi0} rho)``."""
    z = w.zero()
    return TractorTriple(tuple(z for _ in range(w.n)), rho, -nabla_density(w, 0, rho), w.scale)


def rel_bgg_D_rho(w: WeylStructure, P: SchoutenTensor | None, rho: RatExpr) -> RatExpr:
    """Bottom slot of ``nabla^T_{xi0} S(rho)``, the ``E* (x) E* (x) L`` output."""
    return tractor_derivative(w, P, 0, splitting_S_rho(w, P, rho)).tau


def divergence_V(w: WeylStructure, nu: Sequence[RatExpr]) -> RatExpr:
    """``div^V nu = sum_a (nabla_{eta_a} nu)_a`` for ``nu`` in ``V (x) L``."""
    return sum((_nabla_nu(w, w.eta_index(a), nu)[a] for a in range(w.n)), w.zero())


def _nabla_nu(w: WeylStructure, A: int, nu: Sequence[RatExpr]) -> list[RatExpr]:
    gam = density_connection(w).on_frame[A]
    out = []
    for c in range(w.n):
        v = w.derive(A, nu[c]) + gam * nu[c]
        for b in range(w.n):
            coef = w.Gamma[A][w.eta_index(b)][w.eta_index(c)]
            if coef and nu[b]:
                v = v + coef * nu[b]
        out.append(v)
    return out


def splitting_S_nu(w: WeylStructure, P: SchoutenTensor | None, nu: Sequence[RatExpr]) -> tuple[tuple[RatExpr, ...], RatExpr]:
    """``S(nu) = (nu, -div^V(nu) / n)`` in ``TM / T^1M`` (the bottom slot is dropped)."""
    return tuple(nu), -divergence_V(w, nu) / w.n


def rel_bgg_D_nu(w: WeylStructure, P: SchoutenTensor | None, nu: Sequence[RatExpr]) -> list[list[RatExpr]]:
    """``D(nu)[a][c]``: top slot ``c`` of ``nabla^T_{eta_a} S(nu)``; trace-free by construction."""
    nu_, rho = splitting_S_nu(w, P, nu)
    t = TractorTriple(nu_, rho, w.zero(), w.scale)
    return [list(tractor_derivative(w, P, w.eta_index(a), t).nu) for a in range(w.n)]


def check_splitting_operators(g: PathGeometry, s: Scale, gfac: RatExpr, seed: int = 0, pair=None) -> CheckReport:
    """Defining properties and scale independence of ``S(rho)``, ``S(nu)``, ``D(nu)``."""
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("tractor.splitting", g.chart.coords)
    rng = random.Random(seed)
    P, Ph = schouten(w), schouten(wh)
    rho = random_polynomial(w.nvars, rng)
    S = splitting_S_rho(w, P, rho)
    d = tractor_derivative(w, P, 0, S)
    for a, x in enumerate(d.nu):
        rep.zero(f"nabla_xi0 S(rho) nu{a + 1}", x)
    rep.zero("nabla_xi0 S(rho) rho", d.rho)
    Sh = splitting_S_rho(wh, Ph, rho)
    _compare(rep, "S(rho) scale independence", change_splitting(S, w, gfac), Sh)
    nu = [random_polynomial(w.nvars, rng) for _ in range(w.n)]
    nu_, r = splitting_S_nu(w, P, nu)
    moved = change_splitting(TractorTriple(nu_, r, w.zero(), w.scale), w, gfac)
    _, rh = splitting_S_nu(wh, Ph, nu)
    rep.equal("S(nu) rho slot scale independence", moved.rho, rh)
    D, Dh = rel_bgg_D_nu(w, P, nu), rel_bgg_D_nu(wh, Ph, nu)
    rep.zero("trace D(nu)", sum((D[a][a] for a in range(w.n)), w.zero()))
    # eta_a is the same field in both scales, so D(nu) compares entrywise
    for a in range(w.n):
        for c in range(w.n):
            rep.equal(f"D(nu)[{a + 1}][{c + 1}] scale independence", Dh[a][c], D[a][c])
    return rep.finish()


# -- the invariant second order operator on L ----------------------------


def invariant_op_D(w: WeylStructure, P: SchoutenTensor | None, rho: RatExpr) -> RatExpr:
    """``((nabla_E)^2 rho - P^{EE} rho)(xi0, xi0)``."""
    PP = (P or schouten(w)).P
    u = nabla_density(w, 0, rho)
    second = nabla_density(w, 0, u)
    # nabla_{xi0} xi0 = 0 for the Weyl connection of the scale
    for C, coef in enumerate(w.Gamma[0][0]):
        if coef:
            second = second - coef * nabla_density(w, C, rho)
    return second - PP[0][0] * rho


def check_invariant_op(g: PathGeometry, s: Scale, gfac: RatExpr, rho: RatExpr | None = None, pair=None) -> CheckReport:
    """``D rho`` in scale ``gfac * s`` equals ``gfac^2`` times ``D rho`` in scale ``s``."""
    w, wh = _pair(g, s, gfac, pair)
    rep = CheckReport("tractor.invariant_op", g.chart.coords)
    if rho is None:
        rho = random_polynomial(w.nvars, random.Random(2))
    D = invariant_op_D(w, None, rho)
    Dh = invariant_op_D(wh, None, rho)
    rep.equal("D^ rho - gfac^2 D rho", Dh, gfac * gfac * D)
    rep.equal("D rho = -(nabla^T_xi0 S(rho)).tau", D, -rel_bgg_D_rho(w, None, rho))
    return rep.finish()


# -- tractor curvature ------------------------------------------------------


def tractor_curvature(w: WeylStructure, A: int, B: int, t: TractorTriple) -> TractorTriple:
    """``R^T(e_A, e_B) t``."""
    P = schouten(w)
    ab = tractor_derivative(w, P, A, tractor_derivative(w, P, B, t))
    ba = tractor_derivative(w, P, B, tractor_derivative(w, P, A, t))
    br = tractor_derivative(w, P, w.structure[A][B], t)
    return ab - ba - br


def check_tractor_flatness(w: WeylStructure, triples: Sequence[TractorTriple] | None = None) -> CheckReport:
    """Vanishing of the tractor curvature, expected on the flat model."""
    rep = CheckReport("tractor.curvature", w.geometry.chart.coords)
    if triples is None:
        one, z = RatExpr.one(w.nvars), w.zero()
        triples = []
        for k in range(w.n + 2):
            slots = [one if i == k else z for i in range(w.n + 2)]
            triples.append(TractorTriple(tuple(slots[: w.n]), slots[w.n], slots[w.n + 1], w.scale))
    for k, t in enumerate(triples):
        for A in range(w.dim):
            for B in range(A + 1, w.dim):
                R = tractor_curvature(w, A, B, t)
                names = [f"nu{i + 1}" for i in range(w.n)] + ["rho", "tau"]
                for name, x in zip(names, R.slots):
                    rep.zero(f"R^T({w.label(A)},{w.label(B)}) t{k} {name}", x)
    return rep.finish()
