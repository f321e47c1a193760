"""Classical Monge-Ampere equations on the Darboux chart.

An equation N (u_xx u_yy - u_xy^2) + A u_xx + B u_xy + C u_yy + D = 0 is
described by five coefficient expressions in (x1, x2, u, p1, p2).  Its
discriminant is Delta = B^2 - 4AC + 4ND; the sign gives the type
(elliptic < 0, parabolic = 0, hyperbolic > 0).  The structure operator
structure_operator on the contact distribution satisfies structure_operator^2 = Delta * I, is
self-adjoint for the curvature pairing, and a twice-differentiable f
solves the equation at a base point exactly when the tangent plane of its
Legendrian lift is structure_operator-invariant there.
"""

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import symplectic
from .contact import CHART_VARIABLES, ContactChart, DarbouxPoint, VectorFieldValue, curvature_gram
from .expr import EvalDomainError, Expr, parse
from .symplectic import ClassificationResult, Operator, SymplecticSpace

__all__ = [
    "EquationType",
    "MAEquation",
    "CandidateSolution",
    "GridSpec",
    "darboux_space",
    "lift_point",
    "discriminant",
    "classify",
    "structure_operator",
    "residual",
    "tangent_frame",
    "invariance_defect",
    "InvarianceReport",
    "basic_algebra",
    "BasicAlgebra",
    "classify_region",
    "RegionClassification",
    "legendre_swap",
    "legendre_swap_point",
]

# a candidate solution is an expression in the two base variables (x1, x2)
CandidateSolution = Expr

SOLUTION_VARIABLES = ("x1", "x2")


class EquationType(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class MAEquation:
    """Coefficient expressions N, A, B, C, D over (x1, x2, u, p1, p2)."""

    N: Expr
    A: Expr
    B: Expr
    C: Expr
    D: Expr

    def __post_init__(self):
        for coeff in (self.N, self.A, self.B, self.C, self.D):
            if coeff.variables != CHART_VARIABLES:
                raise ValueError("coefficients must use the chart variables "
                                 f"{CHART_VARIABLES}")

    @classmethod
    def from_strings(cls, N="0", A="0", B="0", C="0", D="0") -> "MAEquation":
        return cls(*(parse(s, CHART_VARIABLES) for s in (N, A, B, C, D)))

    def coefficients_at(self, pt: DarbouxPoint) -> tuple:
        p = pt.as_tuple()
        return tuple(c.eval(p) for c in (self.N, self.A, self.B, self.C, self.D))


def darboux_space() -> SymplecticSpace:
    """The distribution frame with its curvature Gram matrix as pairing."""
    return SymplecticSpace(curvature_gram(ContactChart(), DarbouxPoint(0, 0, 0, 0, 0)))


def lift_point(f: CandidateSolution, base) -> DarbouxPoint:
    """Legendrian lift (x1, x2, f, f_x1, f_x2) of a base point."""
    jet = f.eval_jet(base, 1)
    return DarbouxPoint(base[0], base[1], jet.value,
                        jet.derivative((1, 0)), jet.derivative((0, 1)))


def discriminant(eq: MAEquation, pt: DarbouxPoint) -> float:
    n, a, b, c, d = eq.coefficients_at(pt)
    return b * b - 4.0 * a * c + 4.0 * n * d


def classify(eq: MAEquation, pt: DarbouxPoint, band: float = 1e-9) -> EquationType:
    delta = discriminant(eq, pt)
    if abs(delta) <= band:
        return EquationType.PARABOLIC
    return EquationType.ELLIPTIC if delta < 0 else EquationType.HYPERBOLIC


def structure_operator(eq: MAEquation, pt: DarbouxPoint) -> Operator:
    """Structure operator in the frame (e1, e2, e3, e4) of the distribution."""
    n, a, b, c, d = eq.coefficients_at(pt)
    m = np.array([
        [b, -2 * a, 0, -2 * n],
        [2 * c, -b, 2 * n, 0],
        [0, 2 * d, b, 2 * c],
        [-2 * d, 0, -2 * a, -b],
    ], dtype=float)
    return Operator(m, darboux_space())


def residual(eq: MAEquation, f: CandidateSolution, base) -> float:
    """E = N (f11 f22 - f12^2) + A f11 + B f12 + C f22 + D at the lift."""
    jet = f.eval_jet(base, 2)
    f11 = jet.derivative((2, 0))
    f12 = jet.derivative((1, 1))
    f22 = jet.derivative((0, 2))
    pt = DarbouxPoint(base[0], base[1], jet.value,
                      jet.derivative((1, 0)), jet.derivative((0, 1)))
    n, a, b, c, d = eq.coefficients_at(pt)
    return n * (f11 * f22 - f12 * f12) + a * f11 + b * f12 + c * f22 + d


def tangent_frame(f: CandidateSolution, base) -> tuple:
    """The two tangent fields of the Legendrian graph at the lifted point:

    Z1 = e1 + f11 e3 + f12 e4,  Z2 = e2 + f12 e3 + f22 e4.
    """
    jet = f.eval_jet(base, 2)
    f11 = jet.derivative((2, 0))
    f12 = jet.derivative((1, 1))
    f22 = jet.derivative((0, 2))
    p1, p2 = jet.derivative((1, 0)), jet.derivative((0, 1))
    pt = DarbouxPoint(base[0], base[1], jet.value, p1, p2)
    z1 = VectorFieldValue((1.0, 0.0, p1, f11, f12), pt)
    z2 = VectorFieldValue((0.0, 1.0, p2, f12, f22), pt)
    return z1, z2


@dataclass(frozen=True)
class InvarianceReport:
    defect: float
    decomposition_deviation: float
    residual: float


def invariance_defect(eq: MAEquation, f: CandidateSolution, base) -> InvarianceReport:
    """How far structure_operator moves the tangent plane of the Legendrian graph.

    Z1, Z2 and e3, e4 form a basis of the distribution along the graph, so
    structure_operator(Z_i) decomposes uniquely as a Z1 + b Z2 + c e3 + d e4; the defect
    is the larger Euclidean norm of the (c, d) parts.  For Z1 the
    decomposition is compared componentwise against

        structure_operator(Z1) = (B - 2 f12 N) Z1 + 2 (C + f11 N) Z2 - 2 E e4,

    which holds identically (solution or not); the deviation is returned.
    """
    jet = f.eval_jet(base, 2)
    f11 = jet.derivative((2, 0))
    f12 = jet.derivative((1, 1))
    f22 = jet.derivative((0, 2))
    pt = DarbouxPoint(base[0], base[1], jet.value,
                      jet.derivative((1, 0)), jet.derivative((0, 1)))
    n, a, b, c, d = eq.coefficients_at(pt)
    e_val = n * (f11 * f22 - f12 * f12) + a * f11 + b * f12 + c * f22 + d

    m = structure_operator(eq, pt).matrix
    z1 = np.array([1.0, 0.0, f11, f12])
    z2 = np.array([0.0, 1.0, f12, f22])

    defect = 0.0
    for z in (z1, z2):
        image = m @ z
        rem = image - image[0] * z1 - image[1] * z2
        defect = max(defect, float(np.hypot(rem[2], rem[3])))

    predicted = ((b - 2 * f12 * n) * z1 + 2 * (c + f11 * n) * z2
                 - 2 * e_val * np.array([0.0, 0.0, 0.0, 1.0]))
    deviation = float(np.abs(m @ z1 - predicted).max())
    return InvarianceReport(defect, deviation, e_val)


@dataclass(frozen=True)
class BasicAlgebra:
    identity: Operator
    generator: Operator
    classification: ClassificationResult
    jordan_closure_defect: float


def basic_algebra(eq: MAEquation, pt: DarbouxPoint, tol: float = 1e-9) -> BasicAlgebra:
    """span{I, structure_operator} with its classification; requires structure_operator non-scalar."""
    sp = darboux_space()
    op = structure_operator(eq, pt)
    result = symplectic.classify_dim4(sp, op, tol=tol)
    if result.type is symplectic.OperatorType.SCALAR:
        raise ValueError("structure_operator is scalar at this point: degenerate equation")
    # Jordan closure: structure_operator * structure_operator must land back in span{I, structure_operator}
    square = symplectic.jordan_product(op, op).matrix
    delta = discriminant(eq, pt)
    closure = float(np.abs(square - delta * np.eye(4)).max())
    if closure > 1e-10 * max(1.0, float(np.linalg.norm(op.matrix)) ** 2):
        raise ValueError("Jordan closure failed: structure_operator^2 is not Delta * I")
    return BasicAlgebra(Operator(np.eye(4), sp), op, result, closure)


# --- region classification ---------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Axes var -> (lo, hi, count); other chart variables sit at fixed values."""

    axes: dict
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in itertools.chain(self.axes, self.fixed):
            if name not in CHART_VARIABLES:
                raise ValueError(f"unknown chart variable {name!r}")
        for name, (lo, hi, count) in self.axes.items():
            if count < 0:
                raise ValueError(f"axis {name!r} has a negative count")

    def axis_names(self) -> list:
        return [v for v in CHART_VARIABLES if v in self.axes]

    def axis_values(self, name: str) -> np.ndarray:
        lo, hi, count = self.axes[name]
        return np.linspace(lo, hi, count)

    def points(self):
        """Yield (index, DarbouxPoint) in row-major order over the axes."""
        names = self.axis_names()
        grids = [self.axis_values(n) for n in names]
        for idx in itertools.product(*(range(len(g)) for g in grids)):
            values = {}
            for n, g, i in zip(names, grids, idx):
                values[n] = float(g[i])
            for n, v in self.fixed.items():
                values[n] = float(v)
            coords = [values.get(v, 0.0) for v in CHART_VARIABLES]
            yield idx, DarbouxPoint(*coords)


@dataclass(frozen=True)
class CellResult:
    index: tuple
    delta: Optional[float]
    type: Optional[str]
    error: Optional[str] = None


@dataclass(frozen=True)
class RegionClassification:
    grid: GridSpec
    band: float
    cells: tuple

    @property
    def error_fraction(self) -> float:
        if not self.cells:
            return 0.0
        return sum(1 for c in self.cells if c.error) / len(self.cells)

    def to_json_dict(self) -> dict:
        cells = []
        for c in self.cells:
            entry = {"index": list(c.index), "delta": c.delta, "type": c.type}
            if c.error is not None:
                entry["error"] = c.error
            cells.append(entry)
        return {
            "grid": {
                "axes": {n: list(self.grid.axes[n]) for n in self.grid.axis_names()},
                "fixed": dict(self.grid.fixed),
                "band": self.band,
            },
            "cells": cells,
        }


def classify_region(eq: MAEquation, grid: GridSpec,
                    band: float = 1e-9) -> RegionClassification:
    """Pointwise type over the grid; |Delta| <= band cells are flagged 'band'.

    An exact zero discriminant is reported as 'parabolic'; evaluation
    failures are recorded per cell and never abort the sweep.
    """
    cells = []
    for idx, pt in grid.points():
        try:
            delta = discriminant(eq, pt)
        except EvalDomainError as exc:
            cells.append(CellResult(idx, None, None, str(exc)))
            continue
        if delta == 0.0:
            kind = "parabolic"
        elif abs(delta) <= band:
            kind = "band"
        elif delta < 0:
            kind = "elliptic"
        else:
            kind = "hyperbolic"
        cells.append(CellResult(idx, delta, kind))
    return RegionClassification(grid, band, tuple(cells))


# --- a fixed contact transformation -------------------------------------------

def legendre_swap_point(pt: DarbouxPoint) -> DarbouxPoint:
    """Partial Legendre transform (x1, x2, u, p1, p2) -> (p1, x2, u - x1 p1, -x1, p2).

    Preserves the contact form du - p1 dx1 - p2 dx2 exactly.
    """
    return DarbouxPoint(pt.p1, pt.x2, pt.u - pt.x1 * pt.p1, -pt.x1, pt.p2)


def legendre_swap(eq: MAEquation) -> MAEquation:
    """The equation seen through the partial Legendre transform.

    Second derivatives of the transformed generating function g satisfy
    g11 = -1/f11, g12 = f12/f11, g22 = (f11 f22 - f12^2)/f11, so the
    coefficient tuple maps to (N, A, B, C, D) -> (-C, -D, B, N, A), composed
    with the inverse point substitution.  The discriminant is preserved.
    """
    x1 = Expr.var("x1", CHART_VARIABLES)
    x2 = Expr.var("x2", CHART_VARIABLES)
    u = Expr.var("u", CHART_VARIABLES)
    p1 = Expr.var("p1", CHART_VARIABLES)
    p2 = Expr.var("p2", CHART_VARIABLES)
    subs = {"x1": -p1, "x2": x2, "u": u - p1 * x1, "p1": x1, "p2": p2}
    return MAEquation(
        N=-(eq.C.subs(subs)),
        A=-(eq.D.subs(subs)),
        B=eq.B.subs(subs),
        C=eq.N.subs(subs),
        D=eq.A.subs(subs),
    )
