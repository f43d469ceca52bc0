"""Multivariate polynomial GCD by the heuristic evaluation/interpolation method.

Candidates are always certified by exact division, so a returned gcd is a
genuine common divisor.  When the heuristic gives up the caller gets
``None`` and falls back to content-only cancellation, which costs expression
size but never correctness.
"""

from __future__ import annotations

from math import gcd, isqrt

from .poly import Poly, layout

_ATTEMPTS = 6


def _symmetric_mod(c: int, m: int) -> int:
    r = c % m
    return r - m if r > m // 2 else r


def _interpolate(h: Poly, x: int, var: int) -> Poly:
    """Recover the ``var``-adic expansion of an image evaluated at ``var = x``."""
    lay = layout(h.nvars)
    unit = lay.units[var] + lay.deg_unit
    out: dict[int, int] = {}
    power = 0
    while h.terms:
        digit = {k: _symmetric_mod(c, x) for k, c in h.terms.items()}
        digit = {k: c for k, c in digit.items() if c}
        shift = power * unit
        for k, c in digit.items():
            out[k + shift] = c
        nxt: dict[int, int] = {}
        for k, c in h.terms.items():
            v = (c - digit.get(k, 0)) // x
            if v:
                nxt[k] = v
        h = Poly(h.nvars, nxt)
        power += 1
    return Poly(h.nvars, out)


def _primitive(p: Poly) -> Poly:
    c = p.content()
    if p.leading_coeff() < 0:
        c = -c
    return p.exact_div_int(c)


def _heu(f: Poly, g: Poly, depth: int = 0) -> tuple[Poly, Poly, Poly] | None:
    nv = f.nvars
    if f.is_const() and g.is_const():
        a, b = f.const_value(), g.const_value()
        h = gcd(a, b)
        if h == 0:
            return None
        return Poly.const(nv, h), Poly.const(nv, a // h), Poly.const(nv, b // h)

    cf, cg = f.content(), g.content()
    common = gcd(cf, cg)
    f = f.exact_div_int(common)
    g = g.exact_div_int(common)

    present = f.variables() | g.variables()
    var = max(present)
    fn, gn = f.max_norm(), g.max_norm()
    bound = 2 * min(fn, gn) + 29
    x = max(
        min(bound, 99 * isqrt(bound)),
        2 * min(fn // abs(f.leading_coeff()), gn // abs(g.leading_coeff())) + 2,
    )
    for _ in range(_ATTEMPTS):
        ff = f.substitute_int(var, x)
        gg = g.substitute_int(var, x)
        if ff.terms and gg.terms:
            res = _heu(ff, gg, depth + 1)
            if res is not None:
                h_img, cff_img, cfg_img = res
                h = _primitive(_interpolate(h_img, x, var))
                cff = f.divexact(h)
                if cff is not None:
                    cfg = g.divexact(h)
                    if cfg is not None:
                        return h.scale(common), cff, cfg
                cff = _interpolate(cff_img, x, var)
                if cff.terms:
                    h = f.divexact(cff)
                    if h is not None:
                        cfg = g.divexact(h)
                        if cfg is not None:
                            return h.scale(common), cff, cfg
                cfg = _interpolate(cfg_img, x, var)
                if cfg.terms:
                    h = g.divexact(cfg)
                    if h is not None:
                        cff = f.divexact(h)
                        if cff is not None:
                            return h.scale(common), cff, cfg
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def poly_gcd(f: Poly, g: Poly) -> Poly | None:
    """Greatest common divisor of two polynomials, or None if the heuristic fails.

    The result has positive leading coefficient (zero iff both inputs are zero).
    """
    nv = f.nvars
    if not f.terms:
        return _primitive(g) if g.terms else Poly.zero(nv)
    if not g.terms:
        return _primitive(f)
    if f == g:
        return _primitive(f)
    if f.is_const() or g.is_const():
        return Poly.const(nv, gcd(f.content(), g.content()))
    if f.is_monomial() or g.is_monomial():
        mono = _monomial_gcd_key(f, g)
        return Poly(nv, {mono: gcd(f.content(), g.content())})
    res = _heu(f, g)
    if res is None:
        return None
    h = res[0]
    return h if h.leading_coeff() > 0 else -h


def _monomial_gcd_key(f: Poly, g: Poly) -> int:
    lay = layout(f.nvars)
    a = f.monomial_gcd()
    b = g.monomial_gcd()
    ea, eb = lay.unpack(a), lay.unpack(b)
    return lay.pack([min(x, y) for x, y in zip(ea, eb)])
