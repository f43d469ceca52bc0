"""Path geometries in a single chart.

A geometry is given by a vector field ``xiE`` spanning the line
distribution ``E`` and ``n`` vector fields spanning ``V``.  The quotient
``Q = TM/H`` is represented concretely in the basis ``q([xiE, eta_a])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .chart import Chart, FrameBasis, VectorField, invert_frame, lie_bracket
from .expr import RatExpr


class GeometryError(ValueError):
    """Raised when an operation needs a property the geometry does not have."""


@dataclass(frozen=True)
class QClass:
    """Element of ``Q`` as coefficients on the classes ``q([xiE, eta_a])``."""

    coeffs: tuple[RatExpr, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: QClass) -> QClass:
        return QClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: QClass) -> QClass:
        return QClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, f) -> QClass:
        return QClass(tuple(c * f for c in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QClass):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None


@dataclass(frozen=True)
class ODESystem:
    """Right-hand sides of ``(y^a)'' = F^a(x, y, y')`` as expression strings or values."""

    n: int
    F: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.F) != self.n:
            raise ValueError(f"expected {self.n} right-hand sides, got {len(self.F)}")


def ode_coords(n: int) -> tuple[str, ...]:
    """Chart coordinates of the ODE model: ``(x, y, p)`` or ``(x, y1.., p1..)``."""
    if n == 1:
        return ("x", "y", "p")
    return ("x",) + tuple(f"y{a}" for a in range(1, n + 1)) + tuple(f"p{a}" for a in range(1, n + 1))


@dataclass
class ValidationReport:
    independent: bool
    involutive: bool
    levi_nondegenerate: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.independent and self.involutive and self.levi_nondegenerate


class PathGeometry:
    """Chart together with frames of ``E`` (one field) and ``V`` (``n`` fields)."""

    def __init__(self, chart: Chart, xiE: VectorField, etas: Sequence[VectorField]):
        if len(etas) != chart.n:
            raise ValueError(f"expected {chart.n} fields spanning V, got {len(etas)}")
        for v in (xiE, *etas):
            if v.dim != chart.dim:
                raise ValueError("vector field dimension does not match the chart")
        self.chart = chart
        self.xiE = xiE
        self.etas = tuple(etas)

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def dim(self) -> int:
        return self.chart.dim

    @cached_property
    def brackets(self) -> tuple[VectorField, ...]:
        """The fields ``[xiE, eta_a]``."""
        return tuple(lie_bracket(self.xiE, eta) for eta in self.etas)

    @cached_property
    def base_frame(self) -> FrameBasis:
        """Frame ``(xiE, eta_1.., [xiE, eta_1]..)``; singular iff Levi-degenerate."""
        try:
            return invert_frame([self.xiE, *self.etas, *self.brackets])
        except linalg.SingularMatrixError as exc:
            raise GeometryError("the Levi bracket is degenerate (frame with [xiE, eta] is singular)") from exc

    def permuted(self, perm: Sequence[int]) -> PathGeometry:
        """The same geometry with coordinate ``i`` renamed to position ``perm[i]``."""
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        coords = tuple(self.chart.coords[inv[j]] for j in range(len(perm)))

        def move(v: VectorField) -> VectorField:
            return VectorField(v.comps[inv[j]].permute(perm) for j in range(len(perm)))

        return PathGeometry(Chart(self.n, coords), move(self.xiE), [move(e) for e in self.etas])

    def __repr__(self) -> str:
        return f"PathGeometry(n={self.n}, coords={self.chart.coords})"


def from_ode(sys: ODESystem) -> PathGeometry:
    """ODE chart model: ``xiE = d_x + p^a d_{y^a} + F^a d_{p^a}``, ``V`` spanned by ``d_{p^a}``."""
    n = sys.n
    chart = Chart(n, ode_coords(n))
    F = [chart.parse(f) if isinstance(f, str) else f for f in sys.F]
    for f in F:
        if f.nvars != chart.dim:
            raise ValueError("right-hand side lives in a ring of the wrong dimension")
    one = chart.const(1)
    comps = [one]
    comps += [chart.var(chart.coords[1 + n + a]) for a in range(n)]
    comps += F
    xiE = VectorField(comps)
    etas = [chart.coord_field(1 + n + a) for a in range(n)]
    return PathGeometry(chart, xiE, etas)


def _column_matrix(fields: Sequence[VectorField]) -> list[list[RatExpr]]:
    return [[f.comps[i] for f in fields] for i in range(fields[0].dim)]


def validate(g: PathGeometry) -> ValidationReport:
    """Check independence, involutivity of ``V`` and Levi nondegeneracy exactly."""
    n = g.n
    witnesses: dict[str, str] = {}
    names = g.chart.coords

    h_cols = _column_matrix([g.xiE, *g.etas])
    minor = linalg.nonzero_minor(h_cols, n + 1)
    independent = minor is not None
    if not independent:
        witnesses["independent"] = f"rank {linalg.rank(h_cols)} < {n + 1}"

    involutive = True
    v_cols = _column_matrix(list(g.etas))
    v_rank = linalg.rank(v_cols)
    for a in range(n):
        for b in range(a + 1, n):
            br = lie_bracket(g.etas[a], g.etas[b])
            ext = _column_matrix([*g.etas, br])
            if linalg.rank(ext) > v_rank:
                involutive = False
                m = linalg.nonzero_minor(ext, v_rank + 1)
                witnesses.setdefault(
                    "involutive", f"[eta{a + 1}, eta{b + 1}] leaves V; minor {m.format(names) if m else '?'}"
                )

    d = linalg.det(_column_matrix([g.xiE, *g.etas, *g.brackets]))
    levi = not d.is_zero()
    if not levi:
        witnesses["levi_nondegenerate"] = "det(xiE, eta, [xiE, eta]) = 0"
    return ValidationReport(independent, involutive, levi, witnesses)


def levi_matrix_det(g: PathGeometry) -> RatExpr:
    """Determinant of the frame ``(xiE, eta, [xiE, eta])``."""
    return linalg.det(_column_matrix([g.xiE, *g.etas, *g.brackets]))


def q_project(g: PathGeometry, X: VectorField) -> QClass:
    """Coefficients ``c_a`` with ``X - sum c_a [xiE, eta_a]`` in ``H``."""
    comps = g.base_frame.components(X)
    return QClass(tuple(comps[1 + g.n :]))


def h_components(g: PathGeometry, X: VectorField) -> list[RatExpr]:
    """Coefficients of ``X`` on ``(xiE, eta_1..eta_n, [xiE, eta_1]..)``."""
    return g.base_frame.components(X)


def levi(g: PathGeometry, xi: VectorField, eta: VectorField) -> QClass:
    """Levi bracket of a section of ``E`` with a section of ``V``."""
    cx = h_components(g, xi)
    if any(not c.is_zero() for c in cx[1:]):
        raise GeometryError("first argument is not a section of E")
    ce = h_components(g, eta)
    if not ce[0].is_zero() or any(not c.is_zero() for c in ce[1 + g.n :]):
        raise GeometryError("second argument is not a section of V")
    return q_project(g, lie_bracket(xi, eta))
