"""Exact linear algebra over the field of rational functions.

Inverses and determinants clear row denominators and then run
fraction-free (Bareiss) Gauss-Jordan elimination over the polynomial ring,
where every division is exact.
"""

from __future__ import annotations

from typing import Sequence

from .expr import Poly, RatExpr, poly_gcd

Matrix = list[list[RatExpr]]


class SingularMatrixError(ArithmeticError):
    pass


def _lcm(a: Poly, b: Poly) -> Poly:
    if a == b:
        return a
    if a.is_const() and b.is_const():
        from math import lcm

        return Poly.const(a.nvars, lcm(a.const_value(), b.const_value()))
    g = poly_gcd(a, b)
    if g is None or g.is_const():
        return a * b
    return a.divexact(g) * b


def _clear_rows(rows: Sequence[Sequence[RatExpr]]) -> tuple[list[list[Poly]], list[Poly]]:
    polys = []
    scales = []
    for row in rows:
        d = row[0].den
        for e in row[1:]:
            if not e.den.is_one():
                d = _lcm(d, e.den)
        scales.append(d)
        polys.append([(e.num * d.divexact(e.den)) if not e.den.is_one() else e.num * d for e in row])
    return polys, scales


def _bareiss_gauss_jordan(m: list[list[Poly]], ncols_left: int) -> tuple[Poly, int]:
    """In-place fraction-free Gauss-Jordan on the left ``ncols_left`` columns.

    Returns (last pivot, sign of the row permutation).  On return the left
    block is ``last_pivot * I`` when the matrix is nonsingular.
    """
    n = len(m)
    nv = m[0][0].nvars
    prev = Poly.const(nv, 1)
    sign = 1
    width = len(m[0])
    for k in range(ncols_left):
        r = next((i for i in range(k, n) if m[i][k].terms), None)
        if r is None:
            raise SingularMatrixError("matrix is singular")
        if r != k:
            m[k], m[r] = m[r], m[k]
            sign = -sign
        pivot_row = m[k]
        p = pivot_row[k]
        for i in range(n):
            if i == k:
                continue
            row = m[i]
            a = row[k]
            new = []
            for j in range(width):
                v = p * row[j] - a * pivot_row[j] if a.terms else p * row[j]
                if not prev.is_one():
                    q = v.divexact(prev)
                    if q is None:
                        raise ArithmeticError("inexact division in fraction-free elimination")
                    v = q
                new.append(v)
            m[i] = new
        prev = p
    return prev, sign


def det(a: Sequence[Sequence[RatExpr]]) -> RatExpr:
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    nv = a[0][0].nvars
    polys, scales = _clear_rows(a)
    try:
        d, sign = _bareiss_gauss_jordan(polys, n)
    except SingularMatrixError:
        return RatExpr.zero(nv)
    den = Poly.const(nv, 1)
    for s in scales:
        den = den * s
    return RatExpr(d.scale(sign), den)


def inverse(a: Sequence[Sequence[RatExpr]]) -> Matrix:
    """Exact inverse; raises :class:`SingularMatrixError` if ``det(a) == 0``."""
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    nv = a[0][0].nvars
    polys, scales = _clear_rows(a)
    one, zero = Poly.const(nv, 1), Poly.zero(nv)
    for i, row in enumerate(polys):
        row.extend(one if j == i else zero for j in range(n))
    d, _ = _bareiss_gauss_jordan(polys, n)
    # left block is d * I, right block is d * (D A)^{-1}; A^{-1} = (D A)^{-1} D
    return [
        [RatExpr(polys[r][n + c] * scales[c], d) for c in range(n)]
        for r in range(n)
    ]


def matmul(a: Sequence[Sequence[RatExpr]], b: Sequence[Sequence[RatExpr]]) -> Matrix:
    nv = a[0][0].nvars
    cols = len(b[0])
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = RatExpr.zero(nv)
            for k, x in enumerate(row):
                if x.num.terms:
                    y = b[k][j]
                    if y.num.terms:
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def matvec(a: Sequence[Sequence[RatExpr]], v: Sequence[RatExpr]) -> list[RatExpr]:
    nv = v[0].nvars
    out = []
    for row in a:
        acc = RatExpr.zero(nv)
        for x, y in zip(row, v):
            if x.num.terms and y.num.terms:
                acc = acc + x * y
        out.append(acc)
    return out


def identity(n: int, nv: int) -> Matrix:
    return [[RatExpr.one(nv) if i == j else RatExpr.zero(nv) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[RatExpr]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def rank(a: Sequence[Sequence[RatExpr]]) -> int:
    """Generic rank over the rational-function field (exact pivoting)."""
    m = [list(row) for row in a]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        for i in range(r + 1, rows):
            f = m[i][c]
            if f.is_zero():
                continue
            f = f * inv
            m[i] = [x - f * y if not y.is_zero() else x for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def nonzero_minor(a: Sequence[Sequence[RatExpr]], size: int) -> RatExpr | None:
    """Some nonzero ``size`` x ``size`` minor of ``a`` (rows x cols), or None."""
    from itertools import combinations

    rows, cols = len(a), len(a[0])
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            d = det([[a[i][j] for j in cs] for i in rs])
            if not d.is_zero():
                return d
    return None
