"""The scalar operators ``L`` and ``D`` on sections of ``H*`` and distinguished scales.

Sections of ``H*`` are given by their values on the frame ``(xiE, eta_a)``.
All forms are extended and corrected in the coframe dual to
``(xiE, eta_a, [xiE, eta_a])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .chart import OneForm, d_exterior
from .expr import RatExpr
from .geometry import PathGeometry
from .verify import CheckReport
from .weyl import Scale, WeylStructure, lazy_curvature, lazy_torsion


class Unsupported(Exception):
    """The requested computation is outside what this package handles."""


@dataclass(frozen=True)
class HStarSection:
    """Section of ``H*``: ``aE`` is the value on ``xiE``, ``aV[a]`` the value on ``eta_a``."""

    aE: RatExpr
    aV: tuple[RatExpr, ...]

    def __add__(self, other: HStarSection) -> HStarSection:
        return HStarSection(self.aE + other.aE, tuple(a + b for a, b in zip(self.aV, other.aV)))

    @classmethod
    def of_E(cls, g: PathGeometry, aE: RatExpr) -> HStarSection:
        return cls(aE, tuple(RatExpr.zero(g.dim) for _ in range(g.n)))


@dataclass(frozen=True)
class DOutput:
    """``D(alpha0)``: ``S[a][b] = dL(alpha0)(eta_a, [xiE, eta_b])``.

    ``e_part[b] = dL(alpha0)(xiE, [xiE, eta_b])`` is the remaining
    ``E* x Q*`` component.
    """

    S: tuple[tuple[RatExpr, ...], ...]
    e_part: tuple[RatExpr, ...]

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.S for x in row) and all(x.is_zero() for x in self.e_part)


def _check_section(g: PathGeometry, a0: HStarSection) -> None:
    if len(a0.aV) != g.n:
        raise ValueError(f"expected {g.n} values on V, got {len(a0.aV)}")


def L_op(g: PathGeometry, a0: HStarSection) -> OneForm:
    """The unique ``alpha`` with ``alpha|_H = a0`` and ``d(alpha)|_{E x V} = 0``."""
    _check_section(g, a0)
    n = g.n
    B = g.base_frame
    nv = g.dim
    comps = [RatExpr.zero(nv)] * nv
    coeffs = [a0.aE, *a0.aV]
    for k, c in enumerate(coeffs):
        if c:
            comps = [x + c * t for x, t in zip(comps, B.coframe[k])]
    ahat = OneForm(comps)
    # beta in Q*: d(beta)(xiE, eta_a) = -beta([xiE, eta_a]) = -b_a must cancel d(ahat)(xiE, eta_a)
    for a in range(n):
        b = d_exterior(ahat, g.xiE, g.etas[a])
        if b:
            comps = [x + b * t for x, t in zip(comps, B.coframe[1 + n + a])]
    return OneForm(comps)


def VV_component(g: PathGeometry, a0: HStarSection) -> dict[tuple[int, int], RatExpr]:
    """``dL(a0)(eta_a, eta_b)`` for ``a < b`` (0-based keys)."""
    alpha = L_op(g, a0)
    return {
        (a, b): d_exterior(alpha, g.etas[a], g.etas[b]) for a in range(g.n) for b in range(a + 1, g.n)
    }


class SymmetryError(ArithmeticError):
    """``D`` came out non-symmetric, which signals an implementation bug."""


def D_op(g: PathGeometry, a0: HStarSection, check_symmetry: bool = True) -> DOutput:
    """``D(a0)`` for ``a0`` in ``E*`` (``aV = 0``)."""
    _check_section(g, a0)
    if any(not x.is_zero() for x in a0.aV):
        raise ValueError("D is defined on sections of E* only (aV must vanish)")
    alpha = L_op(g, a0)
    n = g.n
    S = tuple(tuple(d_exterior(alpha, g.etas[a], g.brackets[b]) for b in range(n)) for a in range(n))
    if check_symmetry:
        for a in range(n):
            for b in range(a + 1, n):
                if S[a][b] != S[b][a]:
                    raise SymmetryError(f"D(alpha0) is not symmetric in ({a + 1}, {b + 1})")
    e_part = tuple(d_exterior(alpha, g.xiE, g.brackets[b]) for b in range(n))
    return DOutput(S, e_part)


def dual_section(g: PathGeometry, s: Scale) -> HStarSection:
    """``alpha0`` in ``E*`` with ``alpha0(g * xiE) = 1``."""
    return HStarSection.of_E(g, s.g.inverse())


def exterior_derivative_vanishes(g: PathGeometry, alpha: OneForm) -> tuple[bool, str | None]:
    """Whether ``d(alpha) = 0``, tested on pairs of frame fields."""
    fields = g.base_frame.fields
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            v = d_exterior(alpha, fields[i], fields[j])
            if v:
                return False, v.format(g.chart.coords)
    return True, None


@dataclass(frozen=True)
class DistinguishedReport:
    distinguished: bool
    d_alpha_zero: bool
    D: DOutput


def is_distinguished(g: PathGeometry, s: Scale) -> DistinguishedReport:
    """Test ``D(alpha0) = 0`` for the section dual to the scale, and ``dL(alpha0) = 0``."""
    a0 = dual_section(g, s)
    D = D_op(g, a0)
    closed, _ = exterior_derivative_vanishes(g, L_op(g, a0))
    return DistinguishedReport(D.is_zero(), closed, D)


def _coordinate_field_index(g: PathGeometry, v) -> int | None:
    hits = [i for i, c in enumerate(v.comps) if not c.is_zero()]
    if len(hits) == 1 and v.comps[hits[0]] == 1:
        return hits[0]
    return None


def find_distinguished(g: PathGeometry) -> Scale:
    """A distinguished scale for geometries whose ``V`` is spanned by coordinate fields.

    The differential of a coordinate ``c`` not differentiated by ``V`` is
    closed and kills ``V``; the scale is ``1 / xiE(c)``.
    """
    idx = [_coordinate_field_index(g, e) for e in g.etas]
    if any(i is None for i in idx):
        raise Unsupported("distinguished scales are only constructed when V is spanned by coordinate fields")
    for c in range(g.dim):
        if c in idx:
            continue
        val = g.xiE.comps[c]
        if not val.is_zero():
            s = Scale(val.inverse())
            rep = is_distinguished(g, s)
            if rep.distinguished and rep.d_alpha_zero:
                return s
    raise Unsupported("no leaf-space coordinate is transverse to E")


def check_distinguished_vanishing(w: WeylStructure) -> CheckReport:
    """Extra vanishing for distinguished scales: ``tau|_{V x iota(Q)}``, ``R|_{H x H}`` on ``V``, ``d(alpha)``."""
    g = w.geometry
    rep = CheckReport("bgg.distinguished_vanishing", g.chart.coords)
    d = is_distinguished(g, w.scale)
    if not d.distinguished:
        raise ValueError("scale is not distinguished")
    T = lazy_torsion(w)
    R = lazy_curvature(w)
    for A in w.V:
        for B in w.Q:
            for C in range(w.dim):
                rep.zero(f"tau({w.label(A)},{w.label(B)}) -> {w.label(C)}", T[A][B][C])
    H = list(w.H)
    for i, A in enumerate(H):
        for B in H[i + 1 :]:
            for C in w.V:
                vals = R(A, B, C)
                for D in range(w.dim):
                    rep.zero(f"R({w.label(A)},{w.label(B)}){w.label(C)} -> {w.label(D)}", vals[D])
    fields = w.frame.fields
    for A in range(w.dim):
        for B in range(A + 1, w.dim):
            rep.zero(f"dalpha({w.label(A)},{w.label(B)})", d_exterior(w.alpha, fields[A], fields[B]))
    return rep.finish()


def nonvanishing_components(w: WeylStructure) -> list[str]:
    """Labels of the components that distinguished scales force to vanish but are nonzero here."""
    T = lazy_torsion(w)
    R = lazy_curvature(w)
    out = []
    for A in w.V:
        for B in w.Q:
            for C in range(w.dim):
                if T[A][B][C]:
                    out.append(f"tau({w.label(A)},{w.label(B)}) -> {w.label(C)}")
    H = list(w.H)
    for i, A in enumerate(H):
        for B in H[i + 1 :]:
            for C in w.V:
                for D, v in enumerate(R(A, B, C)):
                    if v:
                        out.append(f"R({w.label(A)},{w.label(B)}){w.label(C)} -> {w.label(D)}")
    return out


def check_bgg(g: PathGeometry, samples: Sequence[RatExpr] = ()) -> CheckReport:
    """Defining properties of ``L``, symmetry of ``D`` and the closedness implication."""
    rep = CheckReport("bgg.operators", g.chart.coords)
    n = g.n
    sections = [HStarSection.of_E(g, RatExpr.one(g.dim))]
    sections += [HStarSection.of_E(g, f) for f in samples]
    for k, a0 in enumerate(sections):
        alpha = L_op(g, a0)
        rep.equal(f"L(a{k})(xiE)", alpha(g.xiE), a0.aE)
        for a in range(n):
            rep.zero(f"L(a{k})(eta{a + 1})", alpha(g.etas[a]))
            rep.zero(f"dL(a{k})(xiE,eta{a + 1})", d_exterior(alpha, g.xiE, g.etas[a]))
        for (a, b), v in VV_component(g, a0).items():
            rep.zero(f"dL(a{k})(eta{a + 1},eta{b + 1})", v)
        D = D_op(g, a0, check_symmetry=False)
        for a in range(n):
            for b in range(a + 1, n):
                rep.equal(f"D(a{k}) symmetric ({a + 1},{b + 1})", D.S[a][b], D.S[b][a])
        if D.is_zero():
            closed, wit = exterior_derivative_vanishes(g, alpha)
            rep.true(f"D(a{k}) = 0 implies dL(a{k}) = 0", closed, wit or "")
    return rep.finish()

