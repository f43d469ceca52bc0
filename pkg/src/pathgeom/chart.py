"""Coordinate charts, vector fields, one-forms and frames.

Everything is stored in the coordinate frame of a single chart;
adapted-frame components are obtained through :class:`FrameBasis`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg
from .expr import RatExpr, parse


@dataclass(frozen=True)
class Chart:
    """A chart of dimension ``2n + 1`` with named coordinates."""

    n: int
    coords: tuple[str, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank n must be positive")
        if len(self.coords) != 2 * self.n + 1:
            raise ValueError(f"expected {2 * self.n + 1} coordinates, got {len(self.coords)}")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("coordinate names must be distinct")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def parse(self, text: str) -> RatExpr:
        return parse(text, self.coords)

    def const(self, value) -> RatExpr:
        return RatExpr.const(self.dim, value)

    def zero(self) -> RatExpr:
        return RatExpr.zero(self.dim)

    def var(self, name: str) -> RatExpr:
        return RatExpr.var(self.dim, self.coords.index(name))

    def coord_field(self, name_or_index) -> VectorField:
        i = name_or_index if isinstance(name_or_index, int) else self.coords.index(name_or_index)
        return VectorField([RatExpr.one(self.dim) if j == i else RatExpr.zero(self.dim) for j in range(self.dim)])

    def coord_form(self, name_or_index) -> OneForm:
        i = name_or_index if isinstance(name_or_index, int) else self.coords.index(name_or_index)
        return OneForm([RatExpr.one(self.dim) if j == i else RatExpr.zero(self.dim) for j in range(self.dim)])

    def field(self, comps: Sequence[str | RatExpr]) -> VectorField:
        return VectorField([self.parse(c) if isinstance(c, str) else c for c in comps])

    def form(self, comps: Sequence[str | RatExpr]) -> OneForm:
        return OneForm([self.parse(c) if isinstance(c, str) else c for c in comps])

    def format(self, e: RatExpr) -> str:
        return e.format(self.coords)


def derive(f: RatExpr, comps: Sequence[RatExpr]) -> RatExpr:
    """Directional derivative ``X(f)`` for ``X`` with coordinate components ``comps``."""
    nv = f.nvars
    if f.is_const():
        return RatExpr.zero(nv)
    acc = RatExpr.zero(nv)
    for i, c in enumerate(comps):
        if c.num.terms:
            d = f.diff(i)
            if d.num.terms:
                acc = acc + c * d
    return acc


class VectorField:
    """Vector field given by its coefficients in the coordinate frame."""

    __slots__ = ("comps",)

    def __init__(self, comps: Iterable[RatExpr]):
        self.comps = tuple(comps)

    @property
    def dim(self) -> int:
        return len(self.comps)

    def __call__(self, f: RatExpr) -> RatExpr:
        return derive(f, self.comps)

    def __add__(self, other: VectorField) -> VectorField:
        _check_dims(self, other)
        return VectorField(a + b for a, b in zip(self.comps, other.comps))

    def __sub__(self, other: VectorField) -> VectorField:
        _check_dims(self, other)
        return VectorField(a - b for a, b in zip(self.comps, other.comps))

    def __neg__(self) -> VectorField:
        return VectorField(-a for a in self.comps)

    def __mul__(self, f) -> VectorField:
        return VectorField(a * f if a.num.terms else a for a in self.comps)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.dim == other.dim and all(a == b for a, b in zip(self.comps, other.comps))

    __hash__ = None

    def __repr__(self) -> str:
        return f"VectorField({', '.join(c.format() for c in self.comps)})"


class OneForm:
    """One-form given by its coefficients in the coordinate coframe."""

    __slots__ = ("comps",)

    def __init__(self, comps: Iterable[RatExpr]):
        self.comps = tuple(comps)

    @property
    def dim(self) -> int:
        return len(self.comps)

    def __call__(self, x: VectorField) -> RatExpr:
        _check_dims(self, x)
        acc = RatExpr.zero(self.comps[0].nvars)
        for a, b in zip(self.comps, x.comps):
            if a.num.terms and b.num.terms:
                acc = acc + a * b
        return acc

    def __add__(self, other: OneForm) -> OneForm:
        _check_dims(self, other)
        return OneForm(a + b for a, b in zip(self.comps, other.comps))

    def __sub__(self, other: OneForm) -> OneForm:
        _check_dims(self, other)
        return OneForm(a - b for a, b in zip(self.comps, other.comps))

    def __neg__(self) -> OneForm:
        return OneForm(-a for a in self.comps)

    def __mul__(self, f) -> OneForm:
        return OneForm(a * f if a.num.terms else a for a in self.comps)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.dim == other.dim and all(a == b for a, b in zip(self.comps, other.comps))

    __hash__ = None

    def __repr__(self) -> str:
        return f"OneForm({', '.join(c.format() for c in self.comps)})"


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def differential(f: RatExpr) -> OneForm:
    """The exact one-form ``df``."""
    return OneForm(f.diff(i) for i in range(f.nvars))


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """``[X, Y]^i = X(Y^i) - Y(X^i)``."""
    _check_dims(x, y)
    return VectorField(derive(b, x.comps) - derive(a, y.comps) for a, b in zip(x.comps, y.comps))


def d_exterior(beta: OneForm, x: VectorField, y: VectorField) -> RatExpr:
    """``d(beta)(X, Y) = X(beta(Y)) - Y(beta(X)) - beta([X, Y])``."""
    return x(beta(y)) - y(beta(x)) - beta(lie_bracket(x, y))


class FrameBasis:
    """A frame ``(F_0, ..., F_{N-1})`` of vector fields with its dual coframe.

    ``coframe[A]`` holds the coordinate components of the dual one-form
    ``theta^A``, i.e. the coframe matrix is the inverse of the matrix whose
    columns are the frame fields.
    """

    __slots__ = ("fields", "coframe")

    def __init__(self, fields: Sequence[VectorField], coframe: Sequence[Sequence[RatExpr]]):
        self.fields = tuple(fields)
        self.coframe = [list(row) for row in coframe]

    @property
    def dim(self) -> int:
        return len(self.fields)

    def dual(self, a: int) -> OneForm:
        return OneForm(self.coframe[a])

    def components(self, x: VectorField) -> list[RatExpr]:
        """Coefficients ``c_A`` with ``X = sum_A c_A F_A``."""
        return linalg.matvec(self.coframe, x.comps)

    def form_components(self, beta: OneForm) -> list[RatExpr]:
        """Values ``beta(F_A)``."""
        return [beta(f) for f in self.fields]

    def combine(self, coeffs: Sequence[RatExpr]) -> VectorField:
        nv = self.fields[0].comps[0].nvars
        out = [RatExpr.zero(nv)] * self.dim
        for c, f in zip(coeffs, self.fields):
            if c.num.terms:
                out = [o + c * fc if fc.num.terms else o for o, fc in zip(out, f.comps)]
        return VectorField(out)


def frame_matrix(fields: Sequence[VectorField]) -> list[list[RatExpr]]:
    """Matrix with the frame fields as columns."""
    return [[f.comps[i] for f in fields] for i in range(fields[0].dim)]


def invert_frame(fields: Sequence[VectorField]) -> FrameBasis:
    """Build the frame basis; raises :class:`linalg.SingularMatrixError` if degenerate."""
    if len(fields) != fields[0].dim:
        raise ValueError("a frame needs as many fields as the chart dimension")
    return FrameBasis(fields, linalg.inverse(frame_matrix(fields)))


def express_in_frame(x: VectorField, frame: FrameBasis) -> list[RatExpr]:
    return frame.components(x)
