"""Laurent polynomials in the deformation variable."""

import pytest

from algvar.laurent import (
    LaurentPoly,
    PoleAtZeroError,
    ZeroLaurentError,
    laurent_eval_at_zero,
    laurent_order,
    parse_laurent,
)
from algvar.poly import ExactDivisionError, MultiPoly, parse_poly


def test_order_examples():
    assert laurent_order(parse_laurent("t^-1 + 2")) == -1
    assert laurent_order(parse_laurent("t^2")) == 2
    with pytest.raises(ZeroLaurentError):
        laurent_order(LaurentPoly())


def test_order_of_first_degeneration_coefficient():
    # c11(t) of the first degeneration row is (t, 1); the E1-coefficient has order 1
    # (frozen from the sympy oracle in test_acceptance).
    assert laurent_order(parse_laurent("t")) == 1


def test_value_at_zero():
    assert laurent_eval_at_zero(parse_laurent("t + 1")) == MultiPoly.const(1)
    assert laurent_eval_at_zero(parse_laurent("t*alpha + 1")) == MultiPoly.const(1)
    assert laurent_eval_at_zero(LaurentPoly()) == MultiPoly.const(0)
    with pytest.raises(PoleAtZeroError):
        laurent_eval_at_zero(parse_laurent("t^-1"))


def test_arithmetic_and_parsing():
    p = parse_laurent("(3-alpha)*t^2 + t^-1")
    q = parse_laurent("t^-1")
    assert (p - p).is_zero()
    assert (p * q).order() == -2
    assert p.coefficient(2) == parse_poly("3-alpha")
    assert parse_laurent(str(p)) == p


def test_exact_division_with_parameter_coefficients():
    num = parse_laurent("(2-alpha)*(alpha+1)*t^3")
    den = parse_laurent("(2-alpha)*t^2")
    assert num.exact_div(den) == parse_laurent("(alpha+1)*t")
    # monomials are units of the Laurent ring, so this division is exact
    assert parse_laurent("t + 1").exact_div(parse_laurent("t")) == parse_laurent("1 + t^-1")
    with pytest.raises(ExactDivisionError):
        parse_laurent("t + 1").exact_div(parse_laurent("t - 1"))
    # multi-term divisor that divides exactly
    p = parse_laurent("t^2 - 1")
    d = parse_laurent("t - 1")
    assert p.exact_div(d) == parse_laurent("t + 1")


def test_negative_power_of_monomial():
    assert parse_laurent("2*t") ** -1 == parse_laurent("1/2*t^-1")
    with pytest.raises(ExactDivisionError):
        (parse_laurent("t + 1")) ** -1
