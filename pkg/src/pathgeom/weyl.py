"""Weyl structures of a path geometry determined by a scale.

Given a scale ``xi0 = g * xiE`` the construction produces the adapted frame
``(xi0, eta_1..eta_n, zeta_1..zeta_n)`` with ``zeta_a = iota(L(xi0, eta_a))``,
the projection ``Pi: TM -> H`` along ``iota(Q)``, the one-form ``alpha``
with ``Pi_E = alpha * xi0``, and the connection coefficients
``Gamma[A][B][C]`` defined by ``nabla_{e_A} e_B = sum_C Gamma[A][B][C] e_C``.

Frame indices: ``0`` is ``xi0``, ``1..n`` are the ``eta_a`` and
``n+1..2n`` the ``zeta_a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import linalg
from .chart import FrameBasis, OneForm, VectorField, differential, invert_frame, lie_bracket
from .expr import RatExpr
from .geometry import PathGeometry, q_project
from .verify import CheckReport


class WeylError(ArithmeticError):
    """Internal failure of the construction (cannot happen on a valid geometry)."""


@dataclass(frozen=True)
class Scale:
    """The scale ``xi0 = g * xiE``; ``g`` must be a nonzero rational function."""

    g: RatExpr

    def __post_init__(self):
        if self.g.is_zero():
            raise ValueError("a scale must be nonzero")

    def times(self, f: RatExpr) -> Scale:
        return Scale(self.g * f)


@dataclass(frozen=True)
class TensorComponents:
    """Torsion ``T[A][B][C]`` and curvature ``R[A][B][C][D]`` in the adapted frame.

    ``tau(e_A, e_B) = sum_C T[A][B][C] e_C`` and
    ``R(e_A, e_B) e_C = sum_D R[A][B][C][D] e_D``.
    """

    torsion: list | None = None
    curvature: list | None = None


def _zeros(nv: int, *shape: int):
    if len(shape) == 1:
        return [RatExpr.zero(nv) for _ in range(shape[0])]
    return [_zeros(nv, *shape[1:]) for _ in range(shape[0])]


class WeylStructure:
    """The Weyl structure of a scale; built by :func:`build`."""

    def __init__(
        self,
        geometry: PathGeometry,
        scale: Scale,
        frame: FrameBasis,
        Gamma: list,
    ):
        self.geometry = geometry
        self.scale = scale
        self.frame = frame
        self.Gamma = Gamma

    # -- frame bookkeeping -------------------------------------------

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def dim(self) -> int:
        return self.geometry.dim

    @property
    def nvars(self) -> int:
        return self.geometry.dim

    @property
    def xi0(self) -> VectorField:
        return self.frame.fields[0]

    @property
    def etas(self) -> tuple[VectorField, ...]:
        return self.frame.fields[1 : 1 + self.n]

    @property
    def zetas(self) -> tuple[VectorField, ...]:
        return self.frame.fields[1 + self.n :]

    @property
    def E(self) -> range:
        return range(0, 1)

    @property
    def V(self) -> range:
        return range(1, 1 + self.n)

    @property
    def Q(self) -> range:
        return range(1 + self.n, 1 + 2 * self.n)

    @property
    def H(self) -> range:
        return range(0, 1 + self.n)

    def block(self, A: int) -> str:
        if A == 0:
            return "E"
        return "V" if A <= self.n else "Q"

    def eta_index(self, a: int) -> int:
        return 1 + a

    def zeta_index(self, a: int) -> int:
        return 1 + self.n + a

    def label(self, A: int) -> str:
        if A == 0:
            return "xi0"
        if A <= self.n:
            return f"eta{A}"
        return f"zeta{A - self.n}"

    def zero(self) -> RatExpr:
        return RatExpr.zero(self.nvars)

    def components(self, X: VectorField) -> list[RatExpr]:
        return self.frame.components(X)

    def vector(self, comps: Sequence[RatExpr]) -> VectorField:
        return self.frame.combine(comps)

    def unit(self, A: int) -> list[RatExpr]:
        return [RatExpr.one(self.nvars) if B == A else self.zero() for B in range(self.dim)]

    def on_frame(self, beta: OneForm) -> list[RatExpr]:
        """Values ``beta(e_A)``."""
        return self.frame.form_components(beta)

    def derive(self, A: int, f: RatExpr) -> RatExpr:
        """``e_A(f)``."""
        return self.frame.fields[A](f)

    def derive_along(self, X: Sequence[RatExpr], f: RatExpr) -> RatExpr:
        """``X(f)`` for ``X`` given by adapted-frame components."""
        acc = self.zero()
        for A, x in enumerate(X):
            if x:
                d = self.derive(A, f)
                if d:
                    acc = acc + x * d
        return acc

    # -- projection and alpha -----------------------------------------

    @cached_property
    def alpha(self) -> OneForm:
        """The form with ``Pi_E = alpha * xi0``."""
        return self.frame.dual(0)

    @cached_property
    def Pi(self) -> list[list[RatExpr]]:
        """Projection ``TM -> H`` along ``iota(Q)`` in the coordinate frame."""
        dim = self.dim
        cols = [f.comps for f in self.frame.fields]
        out = []
        for i in range(dim):
            row = []
            for j in range(dim):
                acc = self.zero()
                for A in self.H:
                    c, t = cols[A][i], self.frame.coframe[A][j]
                    if c and t:
                        acc = acc + c * t
                row.append(acc)
            out.append(row)
        return out

    def project(self, X: VectorField, part: str = "H") -> VectorField:
        """Component of ``X`` in ``E``, ``V``, ``H`` or ``Q`` (the ``iota(Q)`` part)."""
        c = self.components(X)
        keep = {"E": self.E, "V": self.V, "H": self.H, "Q": self.Q}[part]
        return self.vector([x if A in keep else self.zero() for A, x in enumerate(c)])

    def iota_q(self, X: VectorField) -> VectorField:
        """``iota(q(X)) = X - Pi(X)``."""
        return self.project(X, "Q")

    def eta_of_q(self, X: VectorField) -> list[RatExpr]:
        """Coefficients on ``eta_a`` of the unique ``eta`` with ``q(X) = L(xi0, eta)``."""
        c = self.components(X)
        return [c[A] for A in self.Q]

    # -- connection ----------------------------------------------------

    def nabla_frame(self, A: int, B: int) -> list[RatExpr]:
        return self.Gamma[A][B]

    def nabla_comps(self, X: Sequence[RatExpr], Y: Sequence[RatExpr]) -> list[RatExpr]:
        """``nabla_X Y`` with both arguments and the result in adapted components."""
        out = [self.derive_along(X, y) for y in Y]
        for A, x in enumerate(X):
            if not x:
                continue
            for B, y in enumerate(Y):
                if not y:
                    continue
                xy = x * y
                for C, gam in enumerate(self.Gamma[A][B]):
                    if gam:
                        out[C] = out[C] + xy * gam
        return out

    def nabla(self, X: VectorField, Y: VectorField) -> VectorField:
        """``nabla_X Y`` for coordinate vector fields."""
        return self.vector(self.nabla_comps(self.components(X), self.components(Y)))

    def nabla_form(self, X: Sequence[RatExpr], beta_vals: Sequence[RatExpr]) -> list[RatExpr]:
        """Frame values of ``nabla_X beta`` from the frame values of ``beta``."""
        out = covariant_derivative_along(self, X, {(B,): v for B, v in enumerate(beta_vals)}, ("d",))
        return [out.get((B,), self.zero()) for B in range(self.dim)]

    # -- brackets of the adapted frame --------------------------------

    @cached_property
    def structure(self) -> list:
        """``c[A][B][C] = theta^C([e_A, e_B])``."""
        dim = self.dim
        c = [[None] * dim for _ in range(dim)]
        for A in range(dim):
            c[A][A] = _zeros(self.nvars, dim)
            for B in range(A + 1, dim):
                comps = self.components(lie_bracket(self.frame.fields[A], self.frame.fields[B]))
                c[A][B] = comps
                c[B][A] = [-x for x in comps]
        return c

    @cached_property
    def tensors(self) -> TensorComponents:
        return TensorComponents(torsion(self), curvature(self))

    def copy_with_gamma(self, Gamma: list) -> WeylStructure:
        return WeylStructure(self.geometry, self.scale, self.frame, Gamma)


def _solve_levi(Lmat_inv, rhs: Sequence[RatExpr]) -> list[RatExpr]:
    return linalg.matvec(Lmat_inv, rhs)


def build(g: PathGeometry, s: Scale) -> WeylStructure:
    """Construct the Weyl structure of the scale ``s``.

    Steps: flat connection on ``E`` with ``nabla xi0 = 0``; ``nabla^V`` in
    ``E`` and ``V`` directions through the inverse of ``L(xi0, .)``; the
    complement ``zeta_a = [xi0, eta_a] - nabla_{xi0} eta_a``; ``Pi`` and
    ``alpha`` from the adapted frame; ``nabla^V`` in ``zeta`` directions;
    and ``nabla`` on ``iota(Q)`` transported from ``V``.
    """
    n, nv = g.n, g.dim
    xi0 = g.xiE * s.g
    etas = list(g.etas)
    br = [lie_bracket(xi0, e) for e in etas]

    # matrix of L(xi0, .): column b holds q([xi0, eta_b])
    qcols = [q_project(g, b).coeffs for b in br]
    Lmat = [[qcols[b][a] for b in range(n)] for a in range(n)]
    try:
        Linv = linalg.inverse(Lmat)
    except linalg.SingularMatrixError as exc:
        raise WeylError("L(xi0, .) is singular; the geometry is Levi-degenerate") from exc

    half = RatExpr.const(nv, 1) / 2
    nabla_xi_eta = []  # [b] -> eta-coefficients of nabla_{xi0} eta_b
    for b in range(n):
        rhs = [c * half for c in q_project(g, lie_bracket(xi0, br[b])).coeffs]
        nabla_xi_eta.append(_solve_levi(Linv, rhs))
    nabla_eta_eta = [[None] * n for _ in range(n)]  # [a][b]
    for a in range(n):
        for b in range(n):
            rhs = list(q_project(g, lie_bracket(etas[a], br[b])).coeffs)
            nabla_eta_eta[a][b] = _solve_levi(Linv, rhs)

    zetas = []
    for b in range(n):
        corr = VectorField(_zeros(nv, nv))
        for c, coef in enumerate(nabla_xi_eta[b]):
            if coef:
                corr = corr + etas[c] * coef
        zetas.append(br[b] - corr)

    try:
        frame = invert_frame([xi0, *etas, *zetas])
    except linalg.SingularMatrixError as exc:
        raise WeylError("adapted frame is singular") from exc
    alpha = frame.dual(0)

    # nabla_{zeta_a} eta_b = Pi_V([zeta_a, eta_b]) + 1/2 alpha([xi0, [xi0, eta_b]]) eta_a
    nabla_zeta_eta = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            comps = frame.components(lie_bracket(zetas[a], etas[b]))
            vals = [comps[1 + c] for c in range(n)]
            extra = alpha(lie_bracket(xi0, br[b])) * half
            vals[a] = vals[a] + extra
            nabla_zeta_eta[a][b] = vals

    dim = 2 * n + 1
    Gamma = [[_zeros(nv, dim) for _ in range(dim)] for _ in range(dim)]

    def v_block(A: int, b: int) -> list[RatExpr]:
        if A == 0:
            return nabla_xi_eta[b]
        if A <= n:
            return nabla_eta_eta[A - 1][b]
        return nabla_zeta_eta[A - 1 - n][b]

    for A in range(dim):
        for b in range(n):
            coeffs = v_block(A, b)
            for c in range(n):
                Gamma[A][1 + b][1 + c] = coeffs[c]
                Gamma[A][1 + n + b][1 + n + c] = coeffs[c]
    return WeylStructure(g, s, frame, Gamma)


# -- tensors -------------------------------------------------------------


def covariant_derivative_along(
    w: WeylStructure, X: Sequence[RatExpr], T: dict, valence: Sequence[str]
) -> dict:
    """``nabla_X T`` for a tensor with adapted-frame components.

    ``T`` maps index tuples to components; ``valence[i]`` is ``"u"`` for a
    vector slot and ``"d"`` for a covector slot.  Missing keys are zero.
    """
    dim = w.dim
    # connection matrix along X: M[B][C] = sum_A X^A Gamma[A][B][C]
    M = [[w.zero() for _ in range(dim)] for _ in range(dim)]
    for A, x in enumerate(X):
        if not x:
            continue
        for B in range(dim):
            for C, gam in enumerate(w.Gamma[A][B]):
                if gam:
                    M[B][C] = M[B][C] + x * gam
    out = {}
    for idx in itertools.product(range(dim), repeat=len(valence)):
        v = T.get(idx)
        acc = w.derive_along(X, v) if v is not None and v else w.zero()
        for slot, kind in enumerate(valence):
            for K in range(dim):
                if kind == "d":
                    # - sum_K M[idx_slot][K] T[.., K, ..]
                    m = M[idx[slot]][K]
                    if not m:
                        continue
                    t = T.get(idx[:slot] + (K,) + idx[slot + 1 :])
                    if t is not None and t:
                        acc = acc - m * t
                else:
                    # + sum_K M[K][idx_slot] T[.., K, ..]
                    m = M[K][idx[slot]]
                    if not m:
                        continue
                    t = T.get(idx[:slot] + (K,) + idx[slot + 1 :])
                    if t is not None and t:
                        acc = acc + m * t
        if acc:
            out[idx] = acc
    return out


def covariant_derivative(w: WeylStructure, A: int, T: dict, valence: Sequence[str]) -> dict:
    """``nabla_{e_A} T`` for a frame direction ``A``."""
    return covariant_derivative_along(w, w.unit(A), T, valence)


def torsion(w: WeylStructure) -> list:
    """``T[A][B][C]``: ``tau(e_A, e_B) = nabla_A e_B - nabla_B e_A - [e_A, e_B]``."""
    dim = w.dim
    c = w.structure
    T = [[None] * dim for _ in range(dim)]
    for A in range(dim):
        T[A][A] = _zeros(w.nvars, dim)
        for B in range(A + 1, dim):
            row = [w.Gamma[A][B][C] - w.Gamma[B][A][C] - c[A][B][C] for C in range(dim)]
            T[A][B] = row
            T[B][A] = [-x for x in row]
    return T


def curvature_entry(w: WeylStructure, A: int, B: int, C: int) -> list[RatExpr]:
    """Adapted components of ``R(e_A, e_B) e_C``."""
    dim = w.dim
    G = w.Gamma
    c = w.structure[A][B]
    out = []
    for D in range(dim):
        acc = w.derive(A, G[B][C][D]) - w.derive(B, G[A][C][D])
        for E in range(dim):
            g1 = G[B][C][E]
            if g1:
                g2 = G[A][E][D]
                if g2:
                    acc = acc + g1 * g2
            g1 = G[A][C][E]
            if g1:
                g2 = G[B][E][D]
                if g2:
                    acc = acc - g1 * g2
            ce = c[E]
            if ce:
                g2 = G[E][C][D]
                if g2:
                    acc = acc - ce * g2
        out.append(acc)
    return out


def curvature(w: WeylStructure) -> list:
    """``R[A][B][C][D]`` for all frame indices."""
    dim = w.dim
    R = [[None] * dim for _ in range(dim)]
    for A in range(dim):
        R[A][A] = [_zeros(w.nvars, dim) for _ in range(dim)]
        for B in range(A + 1, dim):
            block = [curvature_entry(w, A, B, C) for C in range(dim)]
            R[A][B] = block
            R[B][A] = [[-x for x in row] for row in block]
    return R


class _LazyCurvature:
    """Curvature entries computed on first use."""

    def __init__(self, w: WeylStructure):
        self.w = w
        self.cache: dict = {}

    def __call__(self, A: int, B: int, C: int) -> list[RatExpr]:
        if A == B:
            return _zeros(self.w.nvars, self.w.dim)
        if A > B:
            return [-x for x in self(B, A, C)]
        key = (A, B, C)
        if key not in self.cache:
            self.cache[key] = curvature_entry(self.w, A, B, C)
        return self.cache[key]


def lazy_curvature(w: WeylStructure) -> _LazyCurvature:
    cached = w.__dict__.get("_lazy_curv")
    if cached is None:
        cached = _LazyCurvature(w)
        w.__dict__["_lazy_curv"] = cached
    return cached


def lazy_torsion(w: WeylStructure) -> list:
    cached = w.__dict__.get("_torsion")
    if cached is None:
        cached = torsion(w)
        w.__dict__["_torsion"] = cached
    return cached


# -- checks --------------------------------------------------------------


def check_characterization(w: WeylStructure) -> CheckReport:
    """Re-verify the defining conditions of the Weyl structure from its ``Gamma``.

    (i) ``E``, ``V``, ``iota(Q)`` are parallel and ``nabla xi0 = 0``;
    (ii) ``iota o L(xi0, .)`` is parallel;
    (iii) ``tau(E, V)`` lies in ``iota(Q)``, ``tau(H, iota(Q))`` lies in ``H``,
    and ``L(tau(xi0, zeta_a), eta_b) = 2 L(xi0, tau(eta_a, zeta_b))``.
    """
    rep = CheckReport("weyl.characterization", w.geometry.chart.coords)
    n, dim = w.n, w.dim
    G = w.Gamma
    for A in range(dim):
        for B in range(dim):
            for C in range(dim):
                if w.block(B) != w.block(C) or B == 0:
                    rep.zero(f"Gamma[{w.label(A)}][{w.label(B)}] -> {w.label(C)}", G[A][B][C])
    # (ii): nabla_A zeta_b = iota(L(xi0, nabla_A eta_b))
    xi0 = w.xi0
    for A in range(dim):
        for b in range(n):
            Y = w.vector(G[A][1 + b])
            expected = w.components(w.iota_q(lie_bracket(xi0, Y)))
            got = G[A][1 + n + b]
            for C in range(dim):
                rep.equal(f"nabla_{w.label(A)} zeta{b + 1} [{w.label(C)}]", got[C], expected[C])
    T = lazy_torsion(w)
    for b in w.V:
        for C in w.H:
            rep.zero(f"tau(xi0,{w.label(b)}) -> {w.label(C)}", T[0][b][C])
    for A in w.H:
        for B in w.Q:
            for C in w.Q:
                rep.zero(f"tau({w.label(A)},{w.label(B)}) -> {w.label(C)}", T[A][B][C])
    g = w.geometry
    for a in range(n):
        for b in range(n):
            t1 = w.vector(T[0][w.zeta_index(a)])
            t2 = w.vector(T[w.eta_index(a)][w.zeta_index(b)])
            lhs = q_project(g, lie_bracket(t1, w.etas[b]))
            rhs = q_project(g, lie_bracket(xi0, w.project(t2, "V")))
            for k in range(n):
                rep.equal(f"norm(eta{a + 1},eta{b + 1})[{k + 1}]", lhs.coeffs[k], rhs.coeffs[k] * 2)
    return rep.finish()


def _alpha_bracket(w: WeylStructure, X: VectorField, Y: VectorField) -> RatExpr:
    return w.alpha(lie_bracket(X, Y))


def check_tors_curv(w: WeylStructure) -> CheckReport:
    """Torsion and curvature identities of the Weyl connection.

    Right-hand sides are computed from Lie brackets and ``alpha`` only.
    """
    rep = CheckReport("weyl.tors_curv", w.geometry.chart.coords)
    n, dim = w.n, w.dim
    T = lazy_torsion(w)
    R = lazy_curvature(w)
    xi0, etas, zetas = w.xi0, w.etas, w.zetas
    for A in w.V:
        for B in w.V:
            for C in range(dim):
                rep.zero(f"tau({w.label(A)},{w.label(B)}) -> {w.label(C)}", T[A][B][C])
    for A in range(dim):
        for B in w.Q:
            for C in w.Q:
                rep.zero(f"tau({w.label(A)},{w.label(B)}) -> {w.label(C)}", T[A][B][C])
    a_xz = [_alpha_bracket(w, xi0, zetas[a]) for a in range(n)]
    a_ez = [[_alpha_bracket(w, etas[a], zetas[b]) for b in range(n)] for a in range(n)]
    half = RatExpr.const(w.nvars, 1) / 2
    for a in range(n):
        for b in range(n):
            expected = _zeros(w.nvars, dim)
            expected[w.eta_index(b)] = -half * a_xz[a]
            expected[0] = expected[0] - a_ez[a][b]
            got = T[w.eta_index(a)][w.zeta_index(b)]
            for C in range(dim):
                rep.equal(f"tau(eta{a + 1},zeta{b + 1}) [{w.label(C)}]", got[C], expected[C])
    for a in range(n):
        for b in range(n):
            expected = _zeros(w.nvars, dim)
            expected[w.eta_index(b)] = expected[w.eta_index(b)] - half * a_xz[a]
            expected[w.eta_index(a)] = expected[w.eta_index(a)] - a_xz[b]
            got = R(0, w.eta_index(a), w.eta_index(b))
            for D in range(dim):
                rep.equal(f"R(xi0,eta{a + 1})eta{b + 1} [{w.label(D)}]", got[D], expected[D])
    for a in range(n):
        for b in range(n):
            for c in range(n):
                expected = _zeros(w.nvars, dim)
                expected[w.eta_index(b)] = expected[w.eta_index(b)] - a_ez[a][c]
                expected[w.eta_index(a)] = expected[w.eta_index(a)] + a_ez[b][c]
                got = R(w.eta_index(a), w.eta_index(b), w.eta_index(c))
                for D in range(dim):
                    rep.equal(f"R(eta{a + 1},eta{b + 1})eta{c + 1} [{w.label(D)}]", got[D], expected[D])
    # phi: V x iota(Q) -> V block is (eta_a, eta_b) -> phi(eta_a) eta_b,
    # with 2 phi(eta_a) the E-component of tau(xi0, zeta_a)
    for a in range(n):
        phi = T[0][w.zeta_index(a)][0] * half
        rep.equal(f"phi(eta{a + 1}) vs -1/2 alpha([xi0,zeta{a + 1}])", phi, -half * a_xz[a])
        for b in range(n):
            for c in range(n):
                expected = phi if b == c else w.zero()
                rep.equal(
                    f"tau(eta{a + 1},zeta{b + 1}) V-part [eta{c + 1}]",
                    T[w.eta_index(a)][w.zeta_index(b)][w.eta_index(c)],
                    expected,
                )
    # right-hand sides through d(alpha)
    from .chart import d_exterior

    for a in range(n):
        rep.equal(f"-alpha([xi0,zeta{a + 1}]) = dalpha(xi0,zeta{a + 1})", -a_xz[a], d_exterior(w.alpha, xi0, zetas[a]))
        for b in range(n):
            rep.equal(
                f"-alpha([eta{a + 1},zeta{b + 1}]) = dalpha(eta{a + 1},zeta{b + 1})",
                -a_ez[a][b],
                d_exterior(w.alpha, etas[a], zetas[b]),
            )
    return rep.finish()


def check_trace_identities(w: WeylStructure) -> CheckReport:
    """Trace of ``R(xi0, .)(.)`` and the Ricci-type trace of the ``V x V x V`` block."""
    rep = CheckReport("weyl.trace_identities", w.geometry.chart.coords)
    n = w.n
    R = lazy_curvature(w)
    nv = w.nvars
    k1 = RatExpr.const(nv, -(2 * n + 1)) / 2
    k2 = RatExpr.const(nv, n - 1)
    for b in range(n):
        tr = w.zero()
        for a in range(n):
            tr = tr + R(0, w.eta_index(a), w.eta_index(b))[w.eta_index(a)]
        rhs = k1 * _alpha_bracket(w, w.xi0, w.zetas[b])
        rep.equal(f"tr R(xi0,.)eta{b + 1}", tr, rhs)
    for b in range(n):
        for c in range(n):
            tr = w.zero()
            for a in range(n):
                tr = tr + R(w.eta_index(a), w.eta_index(b), w.eta_index(c))[w.eta_index(a)]
            rhs = k2 * _alpha_bracket(w, w.etas[b], w.zetas[c])
            rep.equal(f"Ric(eta{b + 1},eta{c + 1})", tr, rhs)
    rep.note(f"factors {-(2 * n + 1)}/2 and {n - 1}")
    return rep.finish()


def log_differential(gfac: RatExpr) -> OneForm:
    """``df`` for ``e^f = gfac``, i.e. ``d(gfac) / gfac``."""
    if gfac.is_zero():
        raise ValueError("scale factor must be nonzero")
    inv = gfac.inverse()
    return OneForm(c * inv for c in differential(gfac).comps)


def check_scale_transform(g: PathGeometry, s: Scale, gfac: RatExpr, pair=None) -> CheckReport:
    """Change-of-scale laws for ``Pi``, ``alpha``, ``iota`` and the connection.

    Both Weyl structures are built independently (``pair`` may supply them);
    every law is evaluated on the frame of the original scale.
    """
    if gfac.is_zero():
        raise ValueError("scale factor must be nonzero")
    w, wh = pair if pair is not None else (build(g, s), build(g, s.times(gfac)))
    rep = CheckReport("weyl.scale_transform", g.chart.coords)
    n, dim, nv = w.n, w.dim, w.nvars
    df = log_differential(gfac)
    half = RatExpr.const(nv, 1) / 2
    xi0, etas, zetas = w.xi0, w.etas, w.zetas
    fields = w.frame.fields
    dfv = w.on_frame(df)  # df(e_A)
    dfx, dfe, dfz = dfv[0], dfv[1 : 1 + n], dfv[1 + n :]

    def cmp(label: str, X: VectorField, Y: VectorField) -> None:
        for i, (a, b) in enumerate(zip(X.comps, Y.comps)):
            rep.equal(f"{label} [{g.chart.coords[i]}]", a, b)

    def eta_sum(coeffs: Sequence[RatExpr]) -> VectorField:
        return w.vector([w.zero()] + list(coeffs) + [w.zero()] * n)

    # projections and alpha
    for A in range(dim):
        psi = fields[A]
        eta_psi = w.eta_of_q(psi)
        df_eta_psi = w.zero()
        for a in range(n):
            if eta_psi[a]:
                df_eta_psi = df_eta_psi + eta_psi[a] * dfe[a]
        cmp(f"Pi_E({w.label(A)})", wh.project(psi, "E"), w.project(psi, "E") + xi0 * df_eta_psi)
        cmp(
            f"Pi_V({w.label(A)})",
            wh.project(psi, "V"),
            w.project(psi, "V") + eta_sum(eta_psi) * (dfx * half),
        )
        rep.equal(f"alpha^({w.label(A)})", wh.alpha(psi), (w.alpha(psi) + df_eta_psi) / gfac)
    # iota^(L(xi0, eta_a)) = zeta_a - df(eta_a) xi0 - 1/2 df(xi0) eta_a
    for a in range(n):
        cmp(f"hat-zeta{a + 1}", wh.zetas[a] * gfac.inverse(), zetas[a] - xi0 * dfe[a] - etas[a] * (dfx * half))

    # E: nabla^_psi xi0 = nabla_psi xi0 - df(psi) xi0
    for A in range(dim):
        cmp(f"nabla^_{w.label(A)} xi0", wh.nabla(fields[A], xi0), w.nabla(fields[A], xi0) - xi0 * dfv[A])

    # V
    for b in range(n):
        cmp(
            f"nabla^_xi0 eta{b + 1}",
            wh.nabla(xi0, etas[b]),
            w.nabla(xi0, etas[b]) + etas[b] * (half * dfx),
        )
    for a in range(n):
        for b in range(n):
            cmp(
                f"nabla^_eta{a + 1} eta{b + 1}",
                wh.nabla(etas[a], etas[b]),
                w.nabla(etas[a], etas[b]) + etas[b] * dfe[a] + etas[a] * dfe[b],
            )
    for a in range(n):
        for b in range(n):
            rhs = (
                w.nabla(zetas[a], etas[b])
                + etas[b] * (half * dfx * dfe[a])
                + etas[a] * (dfx * dfe[b])
                - etas[a] * dfz[b]
            )
            cmp(f"nabla^_zeta{a + 1} eta{b + 1}", wh.nabla(zetas[a], etas[b]), rhs)

    # Q, with (nabla_X df)(Y) from the original connection
    def ndf(A: int) -> list[RatExpr]:
        return w.nabla_form(w.unit(A), dfv)

    ndf_x = ndf(0)
    for a in range(n):
        rhs = (
            w.nabla(xi0, zetas[a])
            - zetas[a] * (half * dfx)
            + xi0 * (ndf_x[1 + a] - half * dfx * dfe[a])
            + etas[a] * (half * (ndf_x[0] + dfx * dfx))
        )
        cmp(f"nabla^_xi0 zeta{a + 1}", wh.nabla(xi0, zetas[a]), rhs)
    for b in range(n):
        ndf_e = ndf(1 + b)
        for a in range(n):
            rhs = (
                w.nabla(etas[b], zetas[a])
                + zetas[b] * dfe[a]
                + xi0 * (ndf_e[1 + a] - 2 * dfe[b] * dfe[a])
                + etas[a] * (half * (ndf_e[0] + dfe[b] * dfx))
            )
            cmp(f"nabla^_eta{b + 1} zeta{a + 1}", wh.nabla(etas[b], zetas[a]), rhs)
    for a in range(n):
        ndf_z = ndf(1 + n + a)
        for b in range(n):
            three_half = RatExpr.const(nv, 3) / 2
            rhs = (
                w.nabla(zetas[a], zetas[b])
                + zetas[b] * (half * dfx * dfe[a] - dfz[a])
                + zetas[a] * (dfx * dfe[b] - dfz[b])
                + xi0 * ndf_z[1 + b]
                + xi0 * (dfz[b] * dfe[a] - three_half * dfx * dfe[a] * dfe[b])
                + etas[b] * (half * (ndf_z[0] + dfz[a] * dfx))
            )
            cmp(f"nabla^_zeta{a + 1} zeta{b + 1}", wh.nabla(zetas[a], zetas[b]), rhs)
    return rep.finish()
