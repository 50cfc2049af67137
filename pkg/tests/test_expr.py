import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from normharm.expr import (
    BranchCutError,
    Const,
    ExprError,
    ParseError,
    PoleError,
    Pow,
    Z,
    differentiate,
    evaluate,
    evaluate_masked,
    parse_expr,
    substitute,
    to_source,
)


def test_parse_identity_expression():
    assert evaluate(parse_expr("z"), 0.3 + 0j) == 0.3 + 0j


def test_parse_half_plane_map_at_zero():
    e = parse_expr("0.5*z*(2-z)/(1-z)^2")
    assert evaluate(e, 0j) == 0j


def test_parse_log_at_real_point():
    v = evaluate(parse_expr("log(1-z)"), 0.9 + 0j)
    assert v == pytest.approx(math.log(0.1), abs=1e-12)
    assert v.imag == 0.0


def test_eval_constant():
    e = Const(2 + 1j)
    for z in (0j, 0.5 + 0.2j, -0.9j):
        assert evaluate(e, z) == 2 + 1j


def test_eval_cubed_pole_proximity():
    assert evaluate(parse_expr("1/(1-z)^3"), 0.9 + 0j) == pytest.approx(1000.0, rel=1e-9)


def test_eval_simple_quotient():
    assert evaluate(parse_expr("z/(1-z)"), 0.5 + 0j) == pytest.approx(1.0, abs=1e-15)


def test_derivative_of_variable():
    d = differentiate(parse_expr("z"))
    assert evaluate(d, 0.7 + 0.1j) == 1.0 + 0j


def test_derivative_matches_closed_form():
    # d/dz [z(2-z)/(2(1-z)^2)] = 1/(1-z)^3
    d = differentiate(parse_expr("0.5*z*(2-z)/(1-z)^2"))
    for z in (0.5 + 0j, 0.2 + 0.3j, -0.4 + 0.1j):
        want = 1.0 / (1.0 - z) ** 3
        assert evaluate(d, z) == pytest.approx(want, rel=1e-12)
    assert evaluate(d, 0.5 + 0j) == pytest.approx(8.0, rel=1e-12)


def test_derivative_finite_difference_cross_check():
    d = differentiate(parse_expr("-0.5*z^2/(1-z)^2"))
    z = 0.3 + 0j
    h = 1e-6
    e = parse_expr("-0.5*z^2/(1-z)^2")
    fd = (evaluate(e, z + h) - evaluate(e, z - h)) / (2 * h)
    sym = evaluate(d, z)
    assert sym == pytest.approx(fd, rel=1e-6)
    assert sym == pytest.approx(-0.3 / 0.343, rel=1e-12)


def test_array_evaluation_matches_scalar():
    e = parse_expr("log(2+z)/(3-z)^2 + exp(z)*z")
    zs = np.array([0.1 + 0.2j, -0.5 + 0.1j, 0.7j, 0.0j])
    arr = evaluate(e, zs)
    for i, z in enumerate(zs):
        assert arr[i] == evaluate(e, complex(z))


def test_eval_is_pure():
    e = parse_expr("(1+z)/(1-z)^2 - log(3+z)")
    zs = np.linspace(0, 0.8, 77) * np.exp(1j * np.linspace(0, 6, 77))
    assert np.array_equal(evaluate(e, zs), evaluate(e, zs))


def test_pole_error_raised():
    with pytest.raises(PoleError):
        evaluate(parse_expr("1/(1-z)"), 1.0 + 0j)


def test_branch_cut_error():
    with pytest.raises(BranchCutError):
        evaluate(parse_expr("log(z)"), -0.5 + 0j)
    with pytest.raises(BranchCutError):
        evaluate(parse_expr("log(z)"), 0j)
    # just off the axis is fine
    evaluate(parse_expr("log(z)"), -0.5 + 1e-12j)


def test_masked_evaluation_flags_bad_points():
    vals, ok = evaluate_masked(parse_expr("1/(1-z)"), np.array([0.5 + 0j, 1.0 + 0j]))
    assert ok.tolist() == [True, False]
    assert vals[0] == 2.0 + 0j


def test_syntax_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse_expr("z + * 2")
    assert err.value.offset == 4


def test_unknown_identifier():
    with pytest.raises(ParseError) as err:
        parse_expr("z + w")
    assert "unknown identifier" in str(err.value)
    assert err.value.offset == 4


def test_exponent_overflow():
    with pytest.raises(ParseError):
        parse_expr("z^65")
    with pytest.raises(ParseError):
        parse_expr("z^-65")
    parse_expr("z^64")
    with pytest.raises(ExprError):
        Pow(Z, 65)


def test_integer_exponent_required():
    with pytest.raises(ParseError):
        parse_expr("z^2.5")


def test_negative_exponent_parses():
    assert evaluate(parse_expr("z^-2"), 2.0 + 0j) == pytest.approx(0.25)


def test_substitute():
    e = parse_expr("z^2 + 1")
    composed = substitute(e, parse_expr("(z+1)/2"))
    assert evaluate(composed, 0.2 + 0j) == pytest.approx((0.6) ** 2 + 1)


_EXPR_TEXTS = st.sampled_from(
    [
        "z",
        "1-z",
        "z^2",
        "-z^3/(1-z)^2",
        "0.5*z*(2-z)/(1-z)^2",
        "log(2+z)",
        "exp(z)-1",
        "z/(1-z) - log(1-z)",
        "(1+z)/(1-z)",
        "1.5e-2*z + 2",
        "--z",
        "z*-2",
        "i*z - 0.25*i",
    ]
)


@given(_EXPR_TEXTS)
@settings(max_examples=60, deadline=None)
def test_print_parse_fixpoint(text):
    s1 = to_source(parse_expr(text))
    s2 = to_source(parse_expr(s1))
    assert s1 == s2


@given(
    st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False),
    _EXPR_TEXTS,
)
@settings(max_examples=100, deadline=None)
def test_reprint_preserves_value(z, text):
    e = parse_expr(text)
    e2 = parse_expr(to_source(e))
    try:
        a = evaluate(e, z)
    except ExprError:
        return
    b = evaluate(e2, z)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-12)
