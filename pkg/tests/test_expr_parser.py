import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tools.expr_parser import parse_scalar, parse_vector, render_scalar
from utils.errors import DimensionMismatch, DivisionByZero, ExprSyntaxError


def test_rational_expression_is_exact():
    expr = parse_scalar("3/4 - 1/2")
    assert expr.exactness == "exact-rational-form"
    assert expr.exact == Fraction(1, 4)
    assert expr.value == 0.25


def test_radicals_and_phases_are_evaluated():
    assert parse_scalar("1/sqrt(2)").value == pytest.approx(1 / math.sqrt(2))
    omega = parse_scalar("exp(2*i*pi/3)")
    assert omega.exactness == "evaluated"
    assert omega.exact is None
    assert abs(omega.value - cmath.exp(2j * math.pi / 3)) < 1e-15


def test_source_reparses_to_the_same_value():
    expr = parse_scalar("  exp(-2*i*pi/3)/2 ")
    assert parse_scalar(expr.source).value == expr.value


@pytest.mark.parametrize("source", ["", "foo", "2**3", "1.5", "sqrt(1, 2)", "abs(2)", "1 +", "x = 1", "True"])
def test_rejects_anything_outside_the_grammar(source):
    with pytest.raises(ExprSyntaxError):
        parse_scalar(source)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        parse_scalar("1/(2-2)")


def test_syntax_error_carries_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse_scalar("1 + )")
    assert info.value.source == "1 + )"
    assert info.value.position >= 0


def test_bytes_input():
    assert parse_scalar(b"1/2").exact == Fraction(1, 2)
    with pytest.raises(ExprSyntaxError):
        parse_scalar(b"\xff\xfe")


def test_parse_vector_checks_arity():
    assert parse_vector(["1", "0", "i"], 3) == [1, 0, 1j]
    with pytest.raises(DimensionMismatch):
        parse_vector(["1", "0"], 3)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_fractions_parse_exactly(p, q):
    assert parse_scalar(f"{p}/{q}").exact == Fraction(p, q)


@settings(max_examples=50)
@given(st.integers(-2**40, 2**40), st.integers(0, 40), st.integers(-2**40, 2**40), st.integers(0, 40))
def test_render_scalar_is_exact(a, k, b, m):
    z = complex(a / 2**k, b / 2**m)
    assert parse_scalar(render_scalar(z)).value == z


def test_powers():
    assert parse_scalar("2^3").exact == 8
    assert parse_scalar("(1/2)^-2").exact == 4
    assert parse_scalar("-2^2").exact == -4
    assert parse_scalar("2^3^2").exact == 512
    assert parse_scalar("1 + 2^3").exact == 9
    root = parse_scalar("2^(1/2)")
    assert root.exactness == "evaluated"
    assert root.value == pytest.approx(math.sqrt(2))
    assert abs(parse_scalar("exp(2*i*pi/3)^3").value - 1) < 1e-12
    assert parse_scalar(parse_scalar("-2^2 + (1/2)^3").source).exact == Fraction(-31, 8)


def test_power_limits():
    with pytest.raises(DivisionByZero):
        parse_scalar("0^-1")
    with pytest.raises(ExprSyntaxError):
        parse_scalar("2^100000")
    with pytest.raises(ExprSyntaxError) as info:
        parse_scalar("2**3")
    assert info.value.position == 1


@pytest.mark.parametrize("source, position", [("foo", 0), ("   foo", 3), ("  1 + foo", 6), (" 2^2 + foo", 7)])
def test_error_position_points_into_the_raw_input(source, position):
    with pytest.raises(ExprSyntaxError) as info:
        parse_scalar(source)
    assert info.value.position == position
    assert info.value.source == source


def test_syntax_error_position_skips_leading_whitespace():
    with pytest.raises(ExprSyntaxError) as info:
        parse_scalar("   1 + )")
    assert info.value.position >= 3
