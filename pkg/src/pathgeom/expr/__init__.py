"""Exact computer-algebra core: polynomials, rational functions, parsing."""

from .gcd import poly_gcd
from .parse import ParseError, UnknownIdentifierError, parse
from .poly import Poly
from .ratexpr import (
    GCD_MODES,
    RatExpr,
    gcd_mode,
    get_gcd_mode,
    is_zero,
    random_point,
    random_zero_test,
)


def arith(a: RatExpr, b: RatExpr, op: str) -> RatExpr:
    """Field arithmetic by operator name (``add``, ``sub``, ``mul``, ``div``)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def pow_int(a: RatExpr, k: int) -> RatExpr:
    return a**k


def diff(a: RatExpr, coord: str | int, coords=None) -> RatExpr:
    """Partial derivative with respect to a coordinate given by index or name."""
    if isinstance(coord, str):
        if coords is None or coord not in coords:
            raise ValueError(f"unknown coordinate {coord!r}")
        coord = list(coords).index(coord)
    if not 0 <= coord < a.nvars:
        raise ValueError(f"coordinate index {coord} out of range")
    return a.diff(coord)


def eval_at(a: RatExpr, point):
    return a.eval_at(point)


__all__ = [
    "GCD_MODES",
    "ParseError",
    "Poly",
    "RatExpr",
    "UnknownIdentifierError",
    "arith",
    "diff",
    "eval_at",
    "gcd_mode",
    "get_gcd_mode",
    "is_zero",
    "parse",
    "poly_gcd",
    "pow_int",
    "random_point",
    "random_zero_test",
]
