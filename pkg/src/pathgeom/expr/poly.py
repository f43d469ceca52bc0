"""Sparse multivariate polynomials over the integers.

Monomials are packed into a single Python int: one 16-bit field per
variable plus a leading total-degree field.  With the first declared
variable in the most significant exponent field, plain integer comparison
of packed keys is the graded lexicographic order, and monomial
multiplication is integer addition.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

BITS = 16
FIELD = (1 << BITS) - 1
MAX_EXP = (1 << (BITS - 1)) - 1
_GUARD_BIT = 1 << (BITS - 1)


class Layout:
    """Bit layout for packed monomials in ``nvars`` variables."""

    __slots__ = ("nvars", "shifts", "units", "deg_shift", "deg_unit", "guard")

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.shifts = tuple(BITS * (nvars - 1 - i) for i in range(nvars))
        self.units = tuple(1 << s for s in self.shifts)
        self.deg_shift = BITS * nvars
        self.deg_unit = 1 << self.deg_shift
        guard = 0
        for s in self.shifts + (self.deg_shift,):
            guard |= _GUARD_BIT << s
        self.guard = guard

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector of length {len(exps)}, expected {self.nvars}")
        key = sum(exps) << self.deg_shift
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            key |= e << s
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & FIELD for s in self.shifts)

    def exponent(self, key: int, i: int) -> int:
        return (key >> self.shifts[i]) & FIELD

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial ``a`` divides monomial ``b``."""
        return ((b | self.guard) - a) & self.guard == self.guard


_LAYOUTS: dict[int, Layout] = {}


def layout(nvars: int) -> Layout:
    lay = _LAYOUTS.get(nvars)
    if lay is None:
        lay = _LAYOUTS.setdefault(nvars, Layout(nvars))
    return lay


class Poly:
    """Immutable sparse polynomial with integer coefficients.

    ``terms`` maps packed monomial keys to nonzero ints; use
    :meth:`from_dict` / :meth:`to_dict` to work with exponent vectors.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict[int, int] | None = None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: int) -> Poly:
        return cls(nvars, {0: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        lay = layout(nvars)
        return cls(nvars, {lay.units[i] + lay.deg_unit: 1})

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[Sequence[int], int]) -> Poly:
        lay = layout(nvars)
        out: dict[int, int] = {}
        for exps, c in terms.items():
            if c:
                k = lay.pack(exps)
                v = out.get(k, 0) + c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return cls(nvars, out)

    def to_dict(self) -> dict[tuple[int, ...], int]:
        lay = layout(self.nvars)
        return {lay.unpack(k): c for k, c in self.terms.items()}

    # -- predicates ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and 0 in t)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(0) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def const_value(self) -> int:
        return self.terms.get(0, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- ring operations ----------------------------------------------

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __add__(self, other: Poly) -> Poly:
        if not other.terms:
            return self
        if not self.terms:
            return other
        a, b = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return Poly(self.nvars, out)

    def __sub__(self, other: Poly) -> Poly:
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) - c
            if v:
                out[k] = v
            else:
                del out[k]
        return Poly(self.nvars, out)

    def __mul__(self, other: Poly) -> Poly:
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly(self.nvars, {})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((kb, cb),) = b.items()
            return Poly(self.nvars, {k + kb: c * cb for k, c in a.items()})
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Poly(self.nvars, {k: c for k, c in out.items() if c})

    def scale(self, c: int) -> Poly:
        if c == 1:
            return self
        if c == 0:
            return Poly(self.nvars, {})
        return Poly(self.nvars, {k: v * c for k, v in self.terms.items()})

    def shift(self, key: int) -> Poly:
        """Multiply by the monomial with packed key ``key``."""
        if key == 0:
            return self
        return Poly(self.nvars, {k + key: c for k, c in self.terms.items()})

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure ----------------------------------------------------

    def leading_key(self) -> int:
        return max(self.terms)

    def leading_coeff(self) -> int:
        return self.terms[max(self.terms)] if self.terms else 0

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.terms) >> layout(self.nvars).deg_shift

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
            if g == 1:
                break
        return g

    def monomial_gcd(self) -> int:
        """Packed key of the gcd of all monomials (0 for the zero poly)."""
        if not self.terms:
            return 0
        lay = layout(self.nvars)
        mins = None
        for k in self.terms:
            e = lay.unpack(k)
            mins = list(e) if mins is None else [min(x, y) for x, y in zip(mins, e)]
            if not any(mins):
                return 0
        return lay.pack(mins)

    def exact_div_int(self, c: int) -> Poly:
        if c == 1:
            return self
        return Poly(self.nvars, {k: v // c for k, v in self.terms.items()})

    def unshift(self, key: int) -> Poly:
        if key == 0:
            return self
        return Poly(self.nvars, {k - key: c for k, c in self.terms.items()})

    def variables(self) -> set[int]:
        lay = layout(self.nvars)
        present = 0
        for k in self.terms:
            present |= k
        return {i for i in range(self.nvars) if (present >> lay.shifts[i]) & FIELD}

    def max_norm(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    # -- calculus and evaluation -------------------------------------

    def diff(self, i: int) -> Poly:
        lay = layout(self.nvars)
        s = lay.shifts[i]
        dec = lay.units[i] + lay.deg_unit
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & FIELD
            if e:
                out[k - dec] = c * e
        return Poly(self.nvars, out)

    def eval_at(self, point: Sequence[Fraction | int]) -> Fraction:
        lay = layout(self.nvars)
        powers: list[dict[int, Fraction | int]] = [{0: 1} for _ in range(self.nvars)]
        total: Fraction | int = 0
        for k, c in self.terms.items():
            term: Fraction | int = c
            for i in range(self.nvars):
                e = (k >> lay.shifts[i]) & FIELD
                if e:
                    cache = powers[i]
                    p = cache.get(e)
                    if p is None:
                        p = cache[e] = point[i] ** e
                    term = term * p
            total += term
        return Fraction(total)

    def substitute_int(self, i: int, value: int) -> Poly:
        """Evaluate variable ``i`` at an integer; result keeps ``nvars``."""
        lay = layout(self.nvars)
        s = lay.shifts[i]
        unit = lay.units[i] + lay.deg_unit
        out: dict[int, int] = {}
        for k, c in self.terms.items():
            e = (k >> s) & FIELD
            if e:
                k -= e * unit
                c *= value**e
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return Poly(self.nvars, out)

    def permute(self, perm: Sequence[int]) -> Poly:
        """Rename variable ``i`` to ``perm[i]``."""
        lay = layout(self.nvars)
        out = {}
        for k, c in self.terms.items():
            e = lay.unpack(k)
            new = [0] * self.nvars
            for i, x in enumerate(e):
                new[perm[i]] = x
            out[lay.pack(new)] = c
        return Poly(self.nvars, out)

    # -- division -----------------------------------------------------

    def divexact(self, other: Poly) -> Poly | None:
        """Return ``self / other`` if the division is exact, else None."""
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        b = other.terms
        if len(b) == 1:
            ((kb, cb),) = b.items()
            lay = layout(self.nvars)
            out = {}
            for k, c in self.terms.items():
                if c % cb or not lay.divides(kb, k):
                    return None
                out[k - kb] = c // cb
            return Poly(self.nvars, out)
        lay = layout(self.nvars)
        lkb = max(b)
        lcb = b[lkb]
        rest = [(k - lkb, c) for k, c in b.items() if k != lkb]
        r = dict(self.terms)
        heap = [-k for k in r]
        heapq.heapify(heap)
        q: dict[int, int] = {}
        while r:
            k = -heapq.heappop(heap)
            c = r.get(k)
            if c is None:
                continue
            if c % lcb or not lay.divides(lkb, k):
                return None
            qc = c // lcb
            qk = k - lkb
            q[qk] = qc
            del r[k]
            for dk, dc in rest:
                kk = qk + dk + lkb
                v = r.get(kk, 0) - qc * dc
                if v:
                    if kk not in r:
                        heapq.heappush(heap, -kk)
                    r[kk] = v
                else:
                    r.pop(kk, None)
        return Poly(self.nvars, q)

    # -- printing -----------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        lay = layout(self.nvars)
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            e = lay.unpack(k)
            mono = "*".join(
                names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(e) if x
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format()})"


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    out: dict[int, int] = {}
    for p in polys:
        for k, c in p.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
    return Poly(nvars, out)
