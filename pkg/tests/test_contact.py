import numpy as np
import pytest

from conftest import chart_poly, random_darboux_points
from macontact.contact import (CHART_VARIABLES, ContactChart, DarbouxPoint,
                               bracket_fields, contact_field,
                               contact_field_jets, contact_form_value,
                               curvature_gram, field_jets_from_exprs,
                               is_contact_field, lagrange_bracket,
                               omega_of_field)
from macontact.expr import Expr

CHART = ContactChart()
ORIGIN = DarbouxPoint(0, 0, 0, 0, 0)


def _const(v):
    return Expr.const(v, CHART_VARIABLES)


def _var(name):
    return Expr.var(name, CHART_VARIABLES)


# frame fields as expressions, for oracle computations
E1 = (_const(1), _const(0), _var("p1"), _const(0), _const(0))
E2 = (_const(0), _const(1), _var("p2"), _const(0), _const(0))
E3 = (_const(0), _const(0), _const(0), _const(1), _const(0))
E4 = (_const(0), _const(0), _const(0), _const(0), _const(1))
FRAME_EXPRS = (E1, E2, E3, E4)

DU = (_const(0), _const(0), _const(1), _const(0), _const(0))


# --- contact form ------------------------------------------------------------

def test_contact_form_on_du():
    pt = DarbouxPoint(1.0, -2.0, 0.5, 3.0, 4.0)
    assert contact_form_value(pt, (0, 0, 1, 0, 0)) == 1.0


def test_contact_form_annihilates_frame():
    rng = np.random.default_rng(0)
    for pt in random_darboux_points(rng, 10):
        for e in FRAME_EXPRS:
            value = [c.eval(pt.as_tuple()) for c in e]
            assert contact_form_value(pt, value) == 0.0


def test_contact_form_on_dx1():
    pt = DarbouxPoint(0, 0, 0, 3.0, 0)
    assert contact_form_value(pt, (1, 0, 0, 0, 0)) == -3.0


# --- curvature ----------------------------------------------------------------

def _omega_expr(field):
    # omega(Z) = Z_u - p1 Z_x1 - p2 Z_x2 as an expression
    return field[2] - _var("p1") * field[0] - _var("p2") * field[1]


def _directional_derivative(field, scalar, pt):
    jet = scalar.eval_jet(pt.as_tuple(), 1)
    return sum(field[i].eval(pt.as_tuple()) * jet.partial(i).value
               for i in range(5))


def test_curvature_gram_matches_exterior_derivative_oracle():
    # R(X, Y) = -d(omega)(X, Y) with
    # d(omega)(X, Y) = X(omega(Y)) - Y(omega(X)) - omega([X, Y])
    rng = np.random.default_rng(1)
    for pt in random_darboux_points(rng, 5):
        gram = curvature_gram(CHART, pt)
        for i, ei in enumerate(FRAME_EXPRS):
            for j, ej in enumerate(FRAME_EXPRS):
                x_of_wy = _directional_derivative(ei, _omega_expr(ej), pt)
                y_of_wx = _directional_derivative(ej, _omega_expr(ei), pt)
                xi = field_jets_from_exprs(ei, pt, 1)
                xj = field_jets_from_exprs(ej, pt, 1)
                w_bracket = omega_of_field(pt, bracket_fields(xi, xj))
                d_omega = x_of_wy - y_of_wx - w_bracket
                assert gram[i, j] == pytest.approx(-d_omega, abs=1e-12)


def test_curvature_gram_entries():
    gram = curvature_gram(CHART, ORIGIN)
    assert gram[0, 2] == -1.0
    assert gram[1, 3] == -1.0
    assert gram[0, 1] == 0.0
    assert np.array_equal(gram.T, -gram)
    assert abs(np.linalg.det(gram)) == 1.0


# --- contact fields -------------------------------------------------------------

def test_contact_field_of_one_is_du():
    rng = np.random.default_rng(2)
    for pt in random_darboux_points(rng, 5):
        x = contact_field(CHART, _const(1), pt)
        assert x.components == (0.0, 0.0, 1.0, 0.0, 0.0)
        assert contact_form_value(pt, x) == 1.0


def test_contact_field_of_p1_is_minus_dx1():
    pt = DarbouxPoint(0.2, 0.4, -0.1, 0.7, 1.3)
    x = contact_field(CHART, _var("p1"), pt)
    assert x.components == (-1.0, 0.0, 0.0, 0.0, 0.0)
    assert contact_form_value(pt, x) == pytest.approx(pt.p1)


def test_contact_field_of_u():
    pt = DarbouxPoint(0.2, 0.4, -0.1, 0.7, 1.3)
    x = contact_field(CHART, _var("u"), pt)
    assert x.components == (0.0, 0.0, pt.u, pt.p1, pt.p2)


def _symbolic_contact_field(monomials):
    """X_nu as five expressions, for nu given by a monomial list."""
    from conftest import derivative_monomials, poly_from_monomials

    def build(mono):
        return poly_from_monomials(CHART_VARIABLES, mono)

    nu = build(monomials)
    d = [build(derivative_monomials(monomials, i)) for i in range(5)]
    p1, p2 = _var("p1"), _var("p2")
    return (-d[3], -d[4], nu - p1 * d[3] - p2 * d[4],
            d[0] + p1 * d[2], d[1] + p2 * d[2])


def test_contact_field_satisfies_both_postconditions():
    from conftest import poly_from_monomials, random_monomials
    rng = np.random.default_rng(3)
    for _ in range(10):
        monomials = random_monomials(rng, 5, degree=3, terms=5)
        nu = poly_from_monomials(CHART_VARIABLES, monomials)
        pts = random_darboux_points(rng, 4)
        for pt in pts:
            x = contact_field(CHART, nu, pt)
            assert contact_form_value(pt, x) == pytest.approx(
                nu.eval(pt.as_tuple()), abs=1e-10)
        field_exprs = _symbolic_contact_field(monomials)
        assert is_contact_field(CHART, field_exprs, pts, tol=1e-9)


def test_is_contact_field_du_true():
    rng = np.random.default_rng(4)
    assert is_contact_field(CHART, DU, random_darboux_points(rng, 6))


def test_is_contact_field_dp1_false():
    rng = np.random.default_rng(5)
    assert not is_contact_field(CHART, E3, random_darboux_points(rng, 6))


# --- Lagrange bracket -------------------------------------------------------------

def test_bracket_of_one_and_u_is_one():
    rng = np.random.default_rng(6)
    for pt in random_darboux_points(rng, 10):
        assert lagrange_bracket(CHART, _const(1), _var("u"), pt) == pytest.approx(
            1.0, abs=1e-12)


def test_bracket_is_alternating():
    rng = np.random.default_rng(7)
    for _ in range(5):
        mu = chart_poly(rng)
        for pt in random_darboux_points(rng, 3):
            assert lagrange_bracket(CHART, mu, mu, pt) == pytest.approx(0.0, abs=1e-10)


def test_bracket_x1_p1_value():
    # convention-dependent value, frozen from this implementation's
    # commutator orientation: {x1, p1}(0) = omega([X_x1, X_p1]) = +1
    assert lagrange_bracket(CHART, _var("x1"), _var("p1"), ORIGIN) == pytest.approx(1.0)


def test_bracket_antisymmetry_and_linearity():
    rng = np.random.default_rng(8)
    for _ in range(5):
        mu, n1, n2 = chart_poly(rng), chart_poly(rng), chart_poly(rng)
        a, b = rng.uniform(-2, 2, 2)
        combo = Expr.const(a, CHART_VARIABLES) * n1 + Expr.const(b, CHART_VARIABLES) * n2
        for pt in random_darboux_points(rng, 3):
            left = lagrange_bracket(CHART, mu, n1, pt)
            assert lagrange_bracket(CHART, n1, mu, pt) == pytest.approx(
                -left, abs=1e-10)
            assert lagrange_bracket(CHART, mu, combo, pt) == pytest.approx(
                a * left + b * lagrange_bracket(CHART, mu, n2, pt),
                rel=1e-10, abs=1e-10)


def test_jacobi_identity():
    rng = np.random.default_rng(9)
    for _ in range(4):
        mu, nu, lam = (chart_poly(rng, degree=2, terms=4) for _ in range(3))
        for pt in random_darboux_points(rng, 2):
            total = 0.0
            for f, g, h in ((mu, nu, lam), (nu, lam, mu), (lam, mu, nu)):
                inner = bracket_fields(contact_field_jets(g, pt, 2),
                                       contact_field_jets(h, pt, 2))
                outer = bracket_fields(contact_field_jets(f, pt, 1), inner)
                total += omega_of_field(pt, outer)
            assert total == pytest.approx(0.0, abs=1e-8)


def test_function_multiple_stays_in_distribution():
    # X_{h nu} - h X_nu lies in the distribution
    rng = np.random.default_rng(10)
    for _ in range(10):
        h, nu = chart_poly(rng, degree=2, terms=4), chart_poly(rng, degree=2, terms=4)
        prod = h * nu
        for pt in random_darboux_points(rng, 3):
            xp = contact_field(CHART, prod, pt).as_array()
            xn = contact_field(CHART, nu, pt).as_array()
            diff = xp - h.eval(pt.as_tuple()) * xn
            assert abs(contact_form_value(pt, diff)) <= 1e-10 * (
                1 + np.abs(diff).max())


def test_generating_function_recovered_from_field():
    # omega(X_nu) = nu pointwise on 100 random (nu, pt) pairs
    rng = np.random.default_rng(11)
    for _ in range(100):
        nu = chart_poly(rng, degree=3, terms=5)
        pt = random_darboux_points(rng, 1)[0]
        x = contact_field(CHART, nu, pt)
        assert contact_form_value(pt, x) == pytest.approx(
            nu.eval(pt.as_tuple()), abs=1e-10 * (1 + abs(nu.eval(pt.as_tuple()))))
