"""Canonical rational functions with exact integer coefficients."""

from __future__ import annotations

import contextlib
import contextvars
import random
import re
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .gcd import poly_gcd
from .poly import Poly, layout

GCD_MODES = ("content", "full")

_gcd_mode: contextvars.ContextVar[str] = contextvars.ContextVar("gcd_mode", default="full")


def get_gcd_mode() -> str:
    return _gcd_mode.get()


@contextlib.contextmanager
def gcd_mode(mode: str) -> Iterator[None]:
    """Select how aggressively fractions are reduced within this context.

    ``content`` cancels integer content and common monomial factors only;
    ``full`` additionally cancels the polynomial gcd of numerator and
    denominator.  Zero tests never depend on the mode.
    """
    if mode not in GCD_MODES:
        raise ValueError(f"unknown gcd mode {mode!r}; expected one of {GCD_MODES}")
    token = _gcd_mode.set(mode)
    try:
        yield
    finally:
        _gcd_mode.reset(token)


class RatExpr:
    """Quotient ``num / den`` of integer polynomials, kept in canonical form.

    Canonical means: integer content and common monomial factors cancelled
    (plus the full polynomial gcd in ``full`` mode), denominator with
    positive leading coefficient in grlex order, and ``0 / 1`` for zero.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, _canonical: bool = False):
        if den is None:
            den = Poly.const(num.nvars, 1)
        if not den.terms:
            raise ZeroDivisionError("rational expression with zero denominator")
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if not _canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def const(cls, nvars: int, value: int | Fraction) -> RatExpr:
        value = Fraction(value)
        return cls(Poly.const(nvars, value.numerator), Poly.const(nvars, value.denominator), _canonical=True)

    @classmethod
    def zero(cls, nvars: int) -> RatExpr:
        return cls(Poly.zero(nvars), Poly.const(nvars, 1), _canonical=True)

    @classmethod
    def one(cls, nvars: int) -> RatExpr:
        return cls(Poly.const(nvars, 1), Poly.const(nvars, 1), _canonical=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> RatExpr:
        return cls(Poly.var(nvars, i), Poly.const(nvars, 1), _canonical=True)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("expression is not constant")
        return Fraction(self.num.const_value(), self.den.const_value())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_const() and self.const_value() == other
        if not isinstance(other, RatExpr):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        return not (self.num * other.den - other.num * self.den).terms

    def structurally_equal(self, other: RatExpr) -> bool:
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        # Only structurally canonical forms hash equal; that is enough for caching.
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> RatExpr:
        if isinstance(other, RatExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return RatExpr.const(self.nvars, other)
        return NotImplemented

    def __neg__(self) -> RatExpr:
        return RatExpr(-self.num, self.den, _canonical=True)

    def __add__(self, other) -> RatExpr:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            if self.den.is_one():
                return RatExpr(self.num + other.num, self.den, _canonical=True)
            return RatExpr(self.num + other.num, self.den)
        if self.den.is_const() and other.den.is_const():
            a, b = self.den.const_value(), other.den.const_value()
            g = gcd(a, b)
            return RatExpr(self.num.scale(b // g) + other.num.scale(a // g), Poly.const(self.nvars, a // g * b))
        return RatExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> RatExpr:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> RatExpr:
        return (-self) + other

    def __mul__(self, other) -> RatExpr:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            return RatExpr.zero(self.nvars)
        if self.den.is_one() and other.den.is_one():
            return RatExpr(self.num * other.num, self.den, _canonical=True)
        if self.is_const() or other.is_const():
            return RatExpr(self.num * other.num, self.den * other.den)
        if _gcd_mode.get() == "full":
            # cross-cancel first to keep the products small
            g1 = _cancel_pair(self.num, other.den)
            g2 = _cancel_pair(other.num, self.den)
            n1, d2 = g1
            n2, d1 = g2
            return RatExpr(n1 * n2, d1 * d2)
        return RatExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RatExpr:
        if not self.num.terms:
            raise ZeroDivisionError("division by the zero rational expression")
        return RatExpr(self.den, self.num)

    def __truediv__(self, other) -> RatExpr:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> RatExpr:
        return self.inverse() * other

    def __pow__(self, k: int) -> RatExpr:
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RatExpr.one(self.nvars)
        return RatExpr(self.num**k, self.den**k)

    # -- calculus and evaluation -------------------------------------

    def diff(self, i: int) -> RatExpr:
        dn = self.num.diff(i)
        if self.den.is_const():
            return RatExpr(dn, self.den)
        dd = self.den.diff(i)
        if not dd.terms:
            return RatExpr(dn, self.den)
        return RatExpr(dn * self.den - self.num * dd, self.den * self.den)

    def eval_at(self, point: Sequence[Fraction | int]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        d = self.den.eval_at(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.eval_at(point) / d

    def permute(self, perm: Sequence[int]) -> RatExpr:
        return RatExpr(self.num.permute(perm), self.den.permute(perm))

    def size(self) -> int:
        return len(self.num.terms) + len(self.den.terms)

    # -- printing -----------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        n = self.num.format(names)
        if self.den.is_one():
            return n
        d = self.den.format(names)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if not self.den.is_const() and not _SINGLE_FACTOR.fullmatch(d):
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RatExpr({self.format()})"


def _cancel_pair(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if a.is_const() or b.is_const():
        return a, b
    g = poly_gcd(a, b)
    if g is None or g.is_const():
        return a, b
    return a.divexact(g), b.divexact(g)


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    nv = num.nvars
    if not num.terms:
        return num, Poly.const(nv, 1)
    if den.is_const():
        d = den.const_value()
        g = gcd(num.content(), d)
        if d < 0:
            g = -g
        return num.exact_div_int(g), Poly.const(nv, d // g)
    # integer content
    g = gcd(num.content(), den.content())
    if den.leading_coeff() < 0:
        g = -g
    if g != 1:
        num = num.exact_div_int(g)
        den = den.exact_div_int(g)
    # common monomial factor
    mn, md = num.monomial_gcd(), den.monomial_gcd()
    if mn and md:
        lay = layout(nv)
        common = lay.pack([min(a, b) for a, b in zip(lay.unpack(mn), lay.unpack(md))])
        if common:
            num = num.unshift(common)
            den = den.unshift(common)
    if _gcd_mode.get() == "full" and not num.is_const() and not den.is_monomial():
        h = poly_gcd(num, den)
        if h is not None and not h.is_const():
            num = num.divexact(h)
            den = den.divexact(h)
            if den.leading_coeff() < 0:
                num, den = -num, -den
    return num, den


_SINGLE_FACTOR = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\^\d+)?")


# -- module-level operations -------------------------------------------


def is_zero(a: RatExpr) -> bool:
    """Exact zero test."""
    return not a.num.terms


def random_point(nvars: int, rng: random.Random, bound: int) -> list[Fraction]:
    """A uniformly drawn rational point with coordinates in ``[-bound, bound]``."""
    pts = []
    for _ in range(nvars):
        q = rng.randint(1, bound)
        pts.append(Fraction(rng.randint(-bound * q, bound * q), q))
    return pts


def random_zero_test(a: RatExpr, trials: int = 32, bound: int = 100, rng: random.Random | None = None) -> bool:
    """Probabilistic zero test by evaluation at random rational points.

    One-sided: a ``False`` answer is always correct.  Points at which the
    denominator vanishes are resampled.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = rng if rng is not None else random.Random(0)
    for _ in range(trials):
        for _attempt in range(1000):
            pt = random_point(a.nvars, rng, bound)
            if a.den.eval_at(pt) != 0:
                break
        else:
            raise RuntimeError("could not find a point where the denominator is nonzero")
        if a.num.eval_at(pt) != 0:
            return False
    return True
