"""Symplectic vector spaces and self-adjoint operators.

Self-adjointness is measured against a fixed antisymmetric Gram matrix J:
an operator A is self-adjoint when <Av, w> = <v, Aw> for the pairing
<v, w> = v^T J w, equivalently A^T J = J A.  Such operators are closed
under the Jordan product (AB + BA)/2, and every non-scalar one on a
4-dimensional space has a degree-2 minimal polynomial whose discriminant
sign splits the classification into elliptic / parabolic / hyperbolic.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import null_space

__all__ = [
    "SymplecticSpace",
    "Operator",
    "OperatorType",
    "ClassificationResult",
    "standard_space",
    "is_self_adjoint",
    "jordan_product",
    "cyclic_subspace",
    "classify_dim4",
    "is_lagrangian",
    "nilpotent_from_lagrangian",
    "direct_sum_operator",
]

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class SymplecticSpace:
    """Even-dimensional real vector space with Gram matrix J, <v,w> = v^T J w."""

    gram: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.gram, dtype=float)
        object.__setattr__(self, "gram", j)
        if j.ndim != 2 or j.shape[0] != j.shape[1] or j.shape[0] % 2:
            raise ValueError("Gram matrix must be square of even dimension")
        if not np.array_equal(j.T, -j):
            raise ValueError("Gram matrix must be antisymmetric")
        scale = np.abs(j).max()
        if scale == 0 or abs(np.linalg.det(j / scale)) <= 1e-12:
            raise ValueError("Gram matrix must be nondegenerate")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def pairing(self, v, w) -> float:
        return float(np.asarray(v) @ self.gram @ np.asarray(w))


@dataclass(frozen=True)
class Operator:
    """A linear operator tied to a symplectic space."""

    matrix: np.ndarray
    space: SymplecticSpace

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator dimension does not match its space")


class OperatorType(enum.Enum):
    SCALAR = "scalar"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class ClassificationResult:
    type: OperatorType
    minimal_polynomial: tuple  # (p, q) of t^2 + p t + q; (lambda,) for scalar
    eigenvalues: tuple
    complex_structure: Optional[np.ndarray] = None   # elliptic: B with B^2 = -I
    eigenplanes: Optional[tuple] = None              # hyperbolic: (basis1, basis2)
    lagrangian_plane: Optional[np.ndarray] = None    # parabolic: W = Ker = Im


def standard_space(n: int) -> SymplecticSpace:
    """Block form J[i, n+i] = 1, J[n+i, i] = -1."""
    if n < 1:
        raise ValueError("n must be positive")
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return SymplecticSpace(j)


def is_self_adjoint(sp: SymplecticSpace, a: Operator, tol: float = 1e-10) -> bool:
    if a.space.dim != sp.dim:
        raise ValueError("operator and space dimensions differ")
    m, j = a.matrix, sp.gram
    return float(np.abs(m.T @ j - j @ m).max()) <= tol


def jordan_product(a: Operator, b: Operator) -> Operator:
    if a.space.dim != b.space.dim:
        raise ValueError("operators live on different spaces")
    return Operator((a.matrix @ b.matrix + b.matrix @ a.matrix) / 2.0, a.space)


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    """Deterministic orientation: first nonzero entry of each column >= 0."""
    out = basis.copy()
    for col in range(out.shape[1]):
        v = out[:, col]
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            out[:, col] = -v
    return out


def _nullspace(m: np.ndarray, rtol: float = _RANK_TOL) -> np.ndarray:
    return _fix_signs(null_space(m, rcond=rtol))


def cyclic_subspace(sp: SymplecticSpace, a: Operator, v) -> np.ndarray:
    """Orthonormal basis of Span{v, Av, A^2 v, ...} (columns)."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("cyclic subspace of the zero vector")
    cols = []
    w = v
    for _ in range(sp.dim):
        cols.append(w)
        w = a.matrix @ w
    stack = np.column_stack(cols)
    u, s, _ = np.linalg.svd(stack, full_matrices=False)
    rank = int(np.sum(s > _RANK_TOL * s[0]))
    return _fix_signs(u[:, :rank])


def is_lagrangian(sp: SymplecticSpace, plane) -> bool:
    """True iff the two given vectors span a Lagrangian plane."""
    p = np.column_stack([np.asarray(v, dtype=float) for v in plane])
    if p.shape[1] != 2:
        raise ValueError("a plane needs exactly two spanning vectors")
    s = np.linalg.svd(p, compute_uv=False)
    if s[1] <= _RANK_TOL * s[0]:
        raise ValueError("plane vectors are linearly dependent")
    if sp.dim != 4:
        return False
    scale = float(np.linalg.norm(p[:, 0]) * np.linalg.norm(p[:, 1]))
    return abs(sp.pairing(p[:, 0], p[:, 1])) <= 1e-10 * max(scale, 1.0)


def classify_dim4(sp: SymplecticSpace, a: Operator, tol: float = 1e-9,
                  band: Optional[float] = None) -> ClassificationResult:
    """Classify a self-adjoint operator on a 4-dimensional symplectic space.

    The minimal polynomial t^2 + p t + q is obtained by a least-squares fit
    of A^2 in span{I, A}; its discriminant d = p^2 - 4q decides the type:

    * d < -band: elliptic, with B = (A - (-p/2) I) / sqrt(-d/4) a complex
      structure (B^2 = -I);
    * d > band: hyperbolic, with the two eigenplanes Ker(A - lambda_i I);
    * |d| <= band: parabolic, with the Lagrangian plane
      W = Ker(A - lambda I) = Im(A - lambda I).

    Parameters
    ----------
    tol : float
        Residual tolerance for self-adjointness, the scalar test and the
        minimal-polynomial fit (scaled by the operator norm).
    band : float, optional
        Width of the parabolic discriminant band; defaults to
        1e-9 * max(1, ||A||_F^2).
    """
    if sp.dim != 4:
        raise ValueError("classification implemented for dimension 4 only")
    m = a.matrix
    norm = float(np.linalg.norm(m))
    scale = max(1.0, norm)
    if not is_self_adjoint(sp, a, tol * scale):
        raise ValueError("operator is not self-adjoint within tolerance")
    if band is None:
        band = 1e-9 * max(1.0, norm ** 2)

    lam = float(np.trace(m)) / 4.0
    if float(np.abs(m - lam * np.eye(4)).max()) <= tol * scale:
        return ClassificationResult(OperatorType.SCALAR, (lam,), (lam,))

    # least-squares fit A^2 = x I + y A  ->  t^2 - y t - x
    basis = np.column_stack([np.eye(4).ravel(), m.ravel()])
    target = (m @ m).ravel()
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = float(np.abs(basis @ coef - target).max())
    if resid > tol * max(1.0, norm ** 2):
        raise ValueError("A^2 is not in span{I, A}: input is not a "
                         "self-adjoint operator of a 4-dim symplectic space")
    p, q = -float(coef[1]), -float(coef[0])
    disc = p * p - 4.0 * q

    if disc < -band:
        re, im = -p / 2.0, np.sqrt(-disc) / 2.0
        b = (m - re * np.eye(4)) / im
        return ClassificationResult(
            OperatorType.ELLIPTIC, (p, q),
            (complex(re, im), complex(re, -im)),
            complex_structure=b)

    if disc > band:
        root = np.sqrt(disc)
        l1, l2 = (-p - root) / 2.0, (-p + root) / 2.0
        planes = tuple(_nullspace(m - l * np.eye(4)) for l in (l1, l2))
        return ClassificationResult(
            OperatorType.HYPERBOLIC, (p, q), (l1, l2), eigenplanes=planes)

    lam = -p / 2.0
    w = _nullspace(m - lam * np.eye(4))
    if w.shape[1] != 2:
        raise ValueError(f"parabolic eigenspace has dimension {w.shape[1]}, "
                         "expected 2")
    return ClassificationResult(
        OperatorType.PARABOLIC, (p, q), (lam, lam), lagrangian_plane=w)


def nilpotent_from_lagrangian(sp: SymplecticSpace, w_plane, u_plane) -> Operator:
    """Self-adjoint B with B^2 = 0 and Ker B = W, built from a complement U.

    For u in U the image B(u) is taken in the line l_u = (symplectic
    orthogonal of u) restricted to W; the two free scales are matched so the
    cross pairing <u1, B u2> + <u2, B u1> vanishes, which is exactly
    self-adjointness.  W must be Lagrangian and U a non-Lagrangian
    complement.
    """
    w1, w2 = (np.asarray(v, dtype=float) for v in w_plane)
    u1, u2 = (np.asarray(v, dtype=float) for v in u_plane)
    if not is_lagrangian(sp, (w1, w2)):
        raise ValueError("W is not a Lagrangian plane")
    full = np.column_stack([u1, u2, w1, w2])
    if abs(np.linalg.det(full)) <= 1e-12 * max(np.abs(full).max(), 1.0) ** 4:
        raise ValueError("U is not complementary to W")
    if is_lagrangian(sp, (u1, u2)):
        raise ValueError("U must be non-Lagrangian for the line construction")

    def line_in_w(u):
        # w = a w1 + b w2 with <u, w> = 0
        g1, g2 = sp.pairing(u, w1), sp.pairing(u, w2)
        if abs(g1) <= 1e-12 and abs(g2) <= 1e-12:
            raise ValueError("symplectic orthogonal of u contains all of W")
        return -g2 * w1 + g1 * w2

    b1, b2 = line_in_w(u1), line_in_w(u2)
    # scales (s, t) with s <u2, b1> + t <u1, b2> = 0
    c1, c2 = sp.pairing(u2, b1), sp.pairing(u1, b2)
    if abs(c1) <= 1e-12 and abs(c2) <= 1e-12:
        s, t = 1.0, 1.0
    else:
        s, t = c2, -c1
    images = np.column_stack([s * b1, t * b2,
                              np.zeros(sp.dim), np.zeros(sp.dim)])
    b = images @ np.linalg.inv(full)
    return Operator(b, sp)


def direct_sum_operator(f) -> Operator:
    """Block operator diag(F, F^T) on the standard space; always self-adjoint."""
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("F must be a square matrix")
    n = f.shape[0]
    sp = standard_space(n)
    m = np.zeros((2 * n, 2 * n))
    m[:n, :n] = f
    m[n:, n:] = f.T
    return Operator(m, sp)
