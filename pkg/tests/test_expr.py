import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_poly_expr
from macontact.expr import (BinOp, EvalDomainError, Expr, ParseError, Pow,
                            multi_indices, parse)

XY = ("x1", "x2")
ALL5 = ("x1", "x2", "u", "p1", "p2")


# --- parsing ------------------------------------------------------------------

def test_parse_sum_of_square_and_product():
    e = parse("p1^2 + x1*x2", ALL5)
    assert isinstance(e.node, BinOp) and e.node.op == "+"
    assert e.eval((1, 2, 0, 3, 0)) == 11


def test_parse_empty_is_syntax_error():
    with pytest.raises(ParseError):
        parse("", XY)
    with pytest.raises(ParseError):
        parse("   ", XY)


def test_parse_difference_of_squares():
    e = parse("x1^2 - x2^2", XY)
    assert e.eval((3, 1)) == 8


def test_parse_unknown_identifier_reports_offset():
    with pytest.raises(ParseError) as err:
        parse("x1 + bogus", XY)
    assert err.value.offset == 5


def test_parse_non_integer_exponent_rejected():
    with pytest.raises(ParseError):
        parse("x1^2.5", XY)


def test_parse_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        parse("x1 + 1 )", XY)


def test_parse_scientific_notation():
    assert parse("1e-05 + 2.5e+2", XY).eval((0, 0)) == pytest.approx(250.00001)


def test_unary_minus_binds_inside_power():
    # grammar: factor := base ('^' int)?, base := '-' base, so -x1^2 = (-x1)^2
    assert parse("-x1^2", XY).eval((2, 0)) == 4.0
    assert parse("-(x1^2)", XY).eval((2, 0)) == -4.0


def test_functions_parse_and_unknown_function_rejected():
    assert parse("sin(x1)^2 + cos(x1)^2", XY).eval((0.3, 0)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ParseError):
        parse("tan(x1)", XY)


# --- evaluation -----------------------------------------------------------------

def test_eval_product():
    assert parse("x1*x2", XY).eval((2, 3)) == 6


def test_eval_ln_domain_error():
    with pytest.raises(EvalDomainError):
        parse("ln(x1)", XY).eval((0, 1))
    with pytest.raises(EvalDomainError):
        parse("ln(x1)", XY).eval((-1, 1))


def test_eval_division_by_zero_is_reported():
    with pytest.raises(EvalDomainError):
        parse("x1 / x2", XY).eval((1, 0))


def test_eval_sqrt_domain():
    assert parse("sqrt(x1)", XY).eval((4, 0)) == 2
    with pytest.raises(EvalDomainError):
        parse("sqrt(x1)", XY).eval((-1, 0))


@given(st.floats(-10, 10))
def test_pythagorean_identity(x):
    assert parse("sin(x1)^2 + cos(x1)^2", XY).eval((x, 0)) == pytest.approx(1.0, abs=1e-15)


def test_point_length_checked():
    with pytest.raises(ValueError):
        parse("x1", XY).eval((1,))


# --- jets -----------------------------------------------------------------------

def test_jet_difference_of_squares():
    jet = parse("x1^2 - x2^2", XY).eval_jet((0, 0), 2)
    expected = {(2, 0): 1.0, (0, 2): -1.0}
    for alpha in multi_indices(2, 2):
        assert jet.coefficient(alpha) == expected.get(alpha, 0.0)


def test_jet_order_zero_equals_eval():
    rng = np.random.default_rng(7)
    for _ in range(20):
        e = random_poly_expr(rng, XY)
        pt = tuple(rng.uniform(-1, 1, 2))
        assert e.eval_jet(pt, 0).value == e.eval(pt)


def test_exp_jet_coefficients_exact():
    jet = parse("exp(x1)", ("x1",)).eval_jet((0,), 3)
    expected = [1.0, 1.0, 0.5, 1.0 / 6.0]
    for m, want in enumerate(expected):
        assert jet.coefficient((m,)) == pytest.approx(want, abs=1e-14)


def test_exp_jet_matches_finite_differences():
    e = parse("exp(x1)", ("x1",))
    jet = e.eval_jet((0,), 3)
    fd1 = (e.eval((1e-5,)) - e.eval((-1e-5,))) / 2e-5
    # second difference needs a larger step to stay above roundoff
    h = 1e-3
    fd2 = (e.eval((h,)) - 2 * e.eval((0,)) + e.eval((-h,))) / h ** 2
    assert jet.derivative((1,)) == pytest.approx(fd1, rel=1e-6)
    assert jet.derivative((2,)) == pytest.approx(fd2, rel=1e-6)


def test_jet_derivatives_match_central_differences():
    # first and second partials of random smooth expressions
    rng = np.random.default_rng(11)
    h = 1e-4
    for _ in range(10):
        e = random_poly_expr(rng, XY, degree=4)
        x, y = rng.uniform(-0.8, 0.8, 2)
        jet = e.eval_jet((x, y), 2)
        fd_x = (e.eval((x + h, y)) - e.eval((x - h, y))) / (2 * h)
        fd_xy = (e.eval((x + h, y + h)) - e.eval((x + h, y - h))
                 - e.eval((x - h, y + h)) + e.eval((x - h, y - h))) / (4 * h * h)
        assert jet.derivative((1, 0)) == pytest.approx(fd_x, rel=1e-6, abs=1e-6)
        assert jet.derivative((1, 1)) == pytest.approx(fd_xy, rel=1e-6, abs=1e-5)


def test_jet_ring_identities():
    rng = np.random.default_rng(13)
    pt = (0.4, -0.7)
    a = random_poly_expr(rng, XY).eval_jet(pt, 3)
    b = random_poly_expr(rng, XY).eval_jet(pt, 3)
    c = random_poly_expr(rng, XY).eval_jet(pt, 3)
    for alpha in multi_indices(2, 3):
        assert (a * b).coefficient(alpha) == pytest.approx(
            (b * a).coefficient(alpha), rel=1e-13, abs=1e-14)
        assert ((a * b) * c).coefficient(alpha) == pytest.approx(
            (a * (b * c)).coefficient(alpha), rel=1e-12, abs=1e-13)
        assert ((a + b) + c).coefficient(alpha) == pytest.approx(
            (a + (b + c)).coefficient(alpha), abs=1e-14)


def test_jet_division_by_zero_constant_term():
    with pytest.raises(EvalDomainError):
        parse("1 / x1", XY).eval_jet((0, 1), 2)


def test_jet_composition_with_functions():
    # d/dx sin(x^2) = 2x cos(x^2)
    e = parse("sin(x1^2)", ("x1",))
    jet = e.eval_jet((0.7,), 1)
    assert jet.derivative((1,)) == pytest.approx(2 * 0.7 * math.cos(0.49), rel=1e-12)


def test_jet_partial_lowers_order():
    jet = parse("x1^3 * x2", XY).eval_jet((2.0, 3.0), 3)
    dx = jet.partial(0)
    assert dx.order == 2
    assert dx.value == pytest.approx(3 * 4 * 3)  # 3 x^2 y at (2, 3)


# --- printing / round trip -------------------------------------------------------

def _random_node_expr(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Expr.const(float(rng.integers(0, 5)), XY)
        return Expr.var(XY[int(rng.integers(0, 2))], XY)
    pick = rng.integers(0, 7)
    a = _random_node_expr(rng, depth - 1)
    b = _random_node_expr(rng, depth - 1)
    if pick == 0:
        return a + b
    if pick == 1:
        return a - b
    if pick == 2:
        return a * b
    if pick == 3:
        return a / b
    if pick == 4:
        return -a
    if pick == 5:
        return a ** int(rng.integers(0, 4))
    return a.apply(("sin", "cos", "exp")[int(rng.integers(0, 3))])


def test_print_parse_round_trip():
    rng = np.random.default_rng(17)
    for _ in range(60):
        e = _random_node_expr(rng)
        assert parse(e.to_string(), XY).node == e.node


def test_round_trip_keeps_float_literals():
    e = Expr.const(0.1, XY) * Expr.var("x1", XY)
    again = parse(e.to_string(), XY)
    assert again.node == e.node


def test_power_of_power_round_trip():
    e = (Expr.var("x1", XY) ** 2) ** 3
    assert isinstance(e.node, Pow)
    assert parse(e.to_string(), XY).node == e.node


def test_substitution():
    e = parse("x1^2 + x2", XY)
    sub = e.subs({"x1": parse("x2 + 1", XY)})
    assert sub.eval((0, 2)) == 9 + 2
