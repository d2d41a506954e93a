import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lseigen import expr
from lseigen.expr import PotentialSyntaxError


@pytest.mark.parametrize(
    "text, x, expected",
    [
        ("x^2", 3.0, 9.0),
        ("0.1*x^4 - 1.5*x^2", 1.0, -1.4),
        ("-25/cosh(x)^2", 0.0, -25.0),
        ("-x^2", 3.0, -9.0),
        ("2^3^2", 0.0, 512.0),
        ("2^-1", 0.0, 0.5),
        ("-2^2", 0.0, -4.0),
        ("(-2)^2", 0.0, 4.0),
        ("1 - 2 - 3", 0.0, -4.0),
        ("8 / 4 / 2", 0.0, 1.0),
        ("2 + 3*4", 0.0, 14.0),
        ("abs(x) * exp(-abs(x))", -2.0, 2.0 * math.exp(-2.0)),
        ("1.5e-1 * x", 2.0, 0.3),
        ("--x", 2.0, 2.0),
    ],
)
def test_precedence_and_values(text, x, expected):
    assert expr.evaluate(expr.parse(text), x) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_vectorized():
    tree = expr.parse("x^2 + 1")
    np.testing.assert_array_equal(expr.evaluate(tree, np.array([0.0, 1.0, 2.0])), [1.0, 2.0, 5.0])


@pytest.mark.parametrize(
    "text, offset",
    [
        ("x +", 3),
        ("sin(x)", 0),
        ("(x + 1", 6),
        ("x + 1)", 5),
        ("y", 0),
        ("2 $ x", 2),
        ("", 0),
        ("   ", 0),
    ],
)
def test_syntax_errors_carry_offset(text, offset):
    with pytest.raises(PotentialSyntaxError) as info:
        expr.parse(text)
    assert info.value.offset == offset


def test_unknown_function_message():
    with pytest.raises(PotentialSyntaxError, match="unknown"):
        expr.parse("tanh(x)")


def test_offset_counts_bytes():
    # the non-ASCII character takes two bytes in UTF-8
    with pytest.raises(PotentialSyntaxError) as info:
        expr.parse("x + é")
    assert info.value.offset == 4


# random expression trees over the grammar
_leaf = st.one_of(
    st.just(expr.Var()),
    st.floats(0, 1e3, allow_nan=False).map(expr.Num),
)


def _extend(children):
    return st.one_of(
        children.map(expr.Neg),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: expr.BinOp(*t)),
        st.tuples(st.sampled_from(["abs", "exp", "cosh"]), children).map(lambda t: expr.Call(*t)),
    )


trees = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_round_trip(tree):
    text = expr.to_text(tree)
    assert expr.parse(text) == tree


@settings(max_examples=200)
@given(trees, st.floats(-3, 3))
def test_round_trip_evaluates_identically(tree, x):
    with np.errstate(all="ignore"):
        a = expr.evaluate(tree, x)
        b = expr.evaluate(expr.parse(expr.to_text(tree)), x)
    assert (a == b) or (np.isnan(a) and np.isnan(b))


@pytest.mark.parametrize(
    "text, even",
    [
        ("x^2", True),
        ("0.1*x^4 - 1.5*x^2", True),
        ("-25/cosh(x)^2", True),
        ("abs(x)^1.5", True),
        ("x", False),
        ("x^3", False),
        ("0.1*x^4 - 0.1*x^3", False),
        ("exp(x)", False),
    ],
)
def test_parity_detection(text, even):
    assert expr.is_even(expr.parse(text)) is even
