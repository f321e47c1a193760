"""Two-dimensional bend subspaces of homogeneous polynomials in (x, y).

A 2-dimensional subspace Q of the degree-k homogeneous polynomials is a
bend when some f of degree k+1 has f_x, f_y spanning Q together with a
second, non-proportional g whose derivatives also lie in Q.  Writing
g_x = alpha f_x + beta f_y and g_y = gamma f_x + delta f_y, equality of
cross derivatives forces

    gamma f_xx + (delta - alpha) f_xy - beta f_yy = 0,

and the trace-free part of [[alpha, beta], [gamma, delta]] squares to c*I
with c = ((alpha - delta)/2)^2 + beta*gamma; the sign of c attaches one of
the three two-dimensional algebras to the bend.  Normal forms are
Span(Re z^k, Im z^k) for z = x + zeta*y.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import null_space, subspace_angles

from .errors import ConsistencyError
from .symplectic import _fix_signs
from .zeta import ZetaKind

__all__ = [
    "HomPoly",
    "BendSubspace",
    "poly_from_fiber_vector",
    "is_bend",
    "structure_matrix",
    "classify_bend",
    "normal_form",
    "prolong_bend",
    "span_angle",
]

_PROBE_SEED = 1729


@dataclass(frozen=True)
class HomPoly:
    """Homogeneous polynomial; coeffs[r] multiplies x^r y^(degree-r)."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", c)
        if c.shape != (self.degree + 1,):
            raise ValueError("coefficient vector length must be degree + 1")

    def diff_x(self) -> "HomPoly":
        k = self.degree
        out = np.array([r * self.coeffs[r] for r in range(1, k + 1)])
        return HomPoly(k - 1, out)

    def diff_y(self) -> "HomPoly":
        k = self.degree
        out = np.array([(k - r) * self.coeffs[r] for r in range(k)])
        return HomPoly(k - 1, out)

    def __call__(self, x: float, y: float) -> float:
        k = self.degree
        return float(sum(c * x ** r * y ** (k - r)
                         for r, c in enumerate(self.coeffs)))

    def __str__(self):
        terms = []
        k = self.degree
        for r in range(k, -1, -1):
            c = self.coeffs[r]
            if c == 0.0:
                continue
            mono = "*".join((["x"] * 0 if r == 0 else [f"x^{r}" if r > 1 else "x"])
                            + ([f"y^{k - r}" if k - r > 1 else "y"] if k - r else []))
            terms.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class BendSubspace:
    degree: int
    q1: HomPoly
    q2: HomPoly
    witness: Optional[tuple] = None        # (f, g) in degree + 1
    matrix: Optional[tuple] = None         # (alpha, beta, gamma, delta)
    kind: Optional[ZetaKind] = None

    def basis_matrix(self) -> np.ndarray:
        return np.column_stack([self.q1.coeffs, self.q2.coeffs])


def poly_from_fiber_vector(k: int, components: dict) -> HomPoly:
    """Fiber tangent vector -> polynomial: d/du_{r,s} maps to x^r y^s/(r! s!)."""
    coeffs = np.zeros(k + 1)
    for r in range(k + 1):
        key = (r, k - r)
        if key not in components:
            raise KeyError(f"missing fiber component {key}")
        coeffs[r] = components[key] / (math.factorial(r) * math.factorial(k - r))
    return HomPoly(k, coeffs)


def span_angle(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Largest principal angle between the column spans."""
    return float(np.max(subspace_angles(basis_a, basis_b)))


def _derivative_matrices(degree: int) -> tuple:
    """Dx, Dy mapping degree coefficients to degree-1 coefficients."""
    dx = np.zeros((degree, degree + 1))
    dy = np.zeros((degree, degree + 1))
    for i in range(degree):
        dx[i, i + 1] = i + 1
        dy[i, i] = degree - i
    return dx, dy


def _prolongation_space(k: int, q1: HomPoly, q2: HomPoly) -> np.ndarray:
    """Basis of {h in P_{k+1} : h_x, h_y in span(q1, q2)} (columns)."""
    span = np.column_stack([q1.coeffs, q2.coeffs])
    s = np.linalg.svd(span, compute_uv=False)
    if s[1] <= 1e-10 * s[0]:
        raise ValueError("q1, q2 must be linearly independent")
    q, _ = np.linalg.qr(span)
    proj_out = np.eye(k + 1) - q @ q.T
    dx, dy = _derivative_matrices(k + 1)
    constraints = np.vstack([proj_out @ dx, proj_out @ dy])
    return _fix_signs(null_space(constraints, rcond=1e-10))


def _spanning_probe(space: np.ndarray, k: int):
    """A vector of the space whose derivative pair has rank 2, if any."""
    dx, dy = _derivative_matrices(k + 1)
    probes = [space[:, i] for i in range(space.shape[1])]
    rng = np.random.default_rng(_PROBE_SEED)
    for _ in range(8):
        w = rng.normal(size=space.shape[1])
        v = space @ w
        probes.append(v / np.linalg.norm(v))
    best, best_ratio = None, 0.0
    for v in probes:
        pair = np.column_stack([dx @ v, dy @ v])
        s = np.linalg.svd(pair, compute_uv=False)
        ratio = s[1] / s[0] if s[0] > 0 else 0.0
        if ratio > best_ratio:
            best, best_ratio = v, ratio
    if best_ratio <= 1e-8:
        return None
    return best


def is_bend(k: int, q1: HomPoly, q2: HomPoly):
    """Decide bendhood; on success return the witness pair (f, g)."""
    if q1.degree != k or q2.degree != k:
        raise ValueError("witness polynomials must have the stated degree")
    space = _prolongation_space(k, q1, q2)
    if space.shape[1] < 2:
        return False, None
    f = _spanning_probe(space, k)
    if f is None:
        return False, None
    # second, non-proportional element: largest residual of the orthonormal
    # basis after projecting out f
    fhat = f / np.linalg.norm(f)
    residuals = space - np.outer(fhat, fhat @ space)
    col = int(np.argmax(np.linalg.norm(residuals, axis=0)))
    g = residuals[:, col]
    g = g / np.linalg.norm(g)
    return True, (HomPoly(k + 1, f), HomPoly(k + 1, g))


def structure_matrix(f: HomPoly, g: HomPoly) -> tuple:
    """(alpha, beta, gamma, delta) with g_x = alpha f_x + beta f_y etc.

    Solved by least squares on coefficient vectors; a residual above
    1e-10 (at the data's scale) means the pair is not a valid witness.  The
    returned matrix always satisfies the cross-derivative identity
    (g_x)_y = (g_y)_x, i.e. gamma f_xx + (delta - alpha) f_xy - beta f_yy
    = 0; that check is a hard internal gate.
    """
    fx, fy = f.diff_x(), f.diff_y()
    gx, gy = g.diff_x(), g.diff_y()
    basis = np.column_stack([fx.coeffs, fy.coeffs])
    scale = 1.0 + float(np.linalg.norm(gx.coeffs) + np.linalg.norm(gy.coeffs))
    sol_x, *_ = np.linalg.lstsq(basis, gx.coeffs, rcond=None)
    sol_y, *_ = np.linalg.lstsq(basis, gy.coeffs, rcond=None)
    res_x = float(np.abs(basis @ sol_x - gx.coeffs).max())
    res_y = float(np.abs(basis @ sol_y - gy.coeffs).max())
    if max(res_x, res_y) > 1e-10 * scale:
        raise ValueError("derivatives of g do not lie in span{f_x, f_y}")
    alpha, beta = float(sol_x[0]), float(sol_x[1])
    gamma, delta = float(sol_y[0]), float(sol_y[1])

    fxx = fx.diff_x()
    fxy = fx.diff_y()
    fyy = fy.diff_y()
    identity = (gamma * fxx.coeffs + (delta - alpha) * fxy.coeffs
                - beta * fyy.coeffs)
    if float(np.abs(identity).max()) > 1e-10 * scale:
        raise ConsistencyError("cross-derivative identity violated for the "
                               "structure matrix")
    return alpha, beta, gamma, delta


def classify_bend(matrix, tol: float = 1e-9):
    """Algebra kind of a structure matrix, plus its normalized generator.

    With B the trace-free part, B^2 = c*I for c = ((alpha-delta)/2)^2 +
    beta*gamma; c < 0, = 0, > 0 select the complex, dual and double
    numbers.  The generator is B/sqrt|c| when c is nonzero, B itself in the
    nilpotent case.
    """
    alpha, beta, gamma, delta = (float(v) for v in matrix)
    scale = max(1.0, abs(alpha), abs(beta), abs(gamma), abs(delta))
    if max(abs(beta), abs(gamma), abs(alpha - delta)) <= tol * scale:
        raise ValueError("structure matrix is scalar: degenerate bend data")
    b = np.array([[(alpha - delta) / 2.0, beta],
                  [gamma, (delta - alpha) / 2.0]])
    c = ((alpha - delta) / 2.0) ** 2 + beta * gamma
    if c < -tol * scale * scale:
        return ZetaKind.MINUS, b / np.sqrt(-c)
    if c > tol * scale * scale:
        return ZetaKind.PLUS, b / np.sqrt(c)
    return ZetaKind.ZERO, b


def normal_form(k: int, kind: ZetaKind) -> BendSubspace:
    """Span(Re z^k, Im z^k) for z = x + zeta*y."""
    if k < 2:
        raise ValueError("bends need degree k >= 2")
    s = kind.square
    re = np.zeros(k + 1)
    im = np.zeros(k + 1)
    for j in range(k + 1):
        coeff = math.comb(k, j)
        if j % 2 == 0:
            re[k - j] += coeff * s ** (j // 2)
        else:
            im[k - j] += coeff * s ** ((j - 1) // 2)
    return BendSubspace(k, HomPoly(k, re), HomPoly(k, im), kind=kind)


def prolong_bend(bend: BendSubspace) -> BendSubspace:
    """The bend one degree up: polynomials whose derivatives lie in the span."""
    ok, _ = is_bend(bend.degree, bend.q1, bend.q2)
    if not ok:
        raise ValueError("input subspace is not a bend")
    space = _prolongation_space(bend.degree, bend.q1, bend.q2)
    if space.shape[1] != 2:
        raise ValueError(f"prolonged space has dimension {space.shape[1]}, "
                         "expected 2")
    k = bend.degree + 1
    q1 = HomPoly(k, space[:, 0])
    q2 = HomPoly(k, space[:, 1])
    ok, witness = is_bend(k, q1, q2)
    if not ok:
        raise ConsistencyError("prolonged subspace failed the bend test")
    matrix = structure_matrix(*witness)
    kind, _ = classify_bend(matrix)
    return BendSubspace(k, q1, q2, witness=witness, matrix=matrix, kind=kind)
