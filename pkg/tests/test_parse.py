import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secantpot import ExprSyntaxError, UnsupportedOperation, parse_function
from secantpot.expr import parse, to_text


def test_cubic_coefficients():
    f = parse_function("z^3-1")
    assert np.allclose(f.num, [-1, 0, 0, 1])
    assert f.is_polynomial


def naive_product(a, b):
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_product_expands_against_brute_force():
    f = parse_function("(z^2-1)*(z-1/2)")
    assert np.allclose(f.num, naive_product([-1, 0, 1], [-0.5, 1]))
    assert np.allclose(f.num, [0.5, -1, -0.5, 1])


def poly_text(coeffs):
    return "(" + "+".join(f"({c})*z^{k}" for k, c in enumerate(coeffs)) + ")"


@given(
    st.lists(st.integers(-9, 9), min_size=1, max_size=5),
    st.lists(st.integers(-9, 9), min_size=1, max_size=5),
)
@settings(max_examples=60, deadline=None)
def test_products_match_brute_force(a, b):
    if not any(a) or not any(b):
        return
    prod = naive_product(a, b)
    if not any(prod[1:]):
        return  # constant functions are rejected
    f = parse_function(poly_text(a) + "*" + poly_text(b))
    expected = np.trim_zeros(np.array(prod, dtype=complex), "b")
    assert np.allclose(f.num, expected)


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse_function("z^^2")
    assert info.value.position == 2
    assert isinstance(info.value, SyntaxError)


@pytest.mark.parametrize("text", ["z^0.5", "2^z", "z^z", "z^(1/2)"])
def test_non_integer_exponents_rejected(text):
    with pytest.raises(UnsupportedOperation):
        parse_function(text)


@pytest.mark.parametrize("text", ["3", "z-z", "1/(z-z)"])
def test_degenerate_functions_rejected(text):
    with pytest.raises(UnsupportedOperation):
        parse_function(text)


@pytest.mark.parametrize("text", ["", "z+", "(z", "z)", "2 z", "z$1"])
def test_malformed(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_imaginary_literals():
    f = parse_function("z^2+2i*z-1.5i")
    assert np.allclose(f.num, [-1.5j, 2j, 1])
    assert parse("i").evaluate(0) == 1j


def expressions():
    leaves = st.one_of(
        st.just("z"),
        st.integers(0, 20).map(str),
        st.floats(0.01, 10, allow_nan=False).map(lambda v: f"{v:.6g}"),
        st.just("2i"),
    )

    def extend(children):
        return st.one_of(
            st.tuples(children, st.sampled_from("+-*/"), children).map(lambda t: f"({t[0]}{t[1]}{t[2]})"),
            st.tuples(children, st.integers(-3, 4)).map(lambda t: f"({t[0]})^{t[1]}" if t[1] >= 0 else f"({t[0]})^({t[1]})"),
            children.map(lambda c: f"-{c}"),
        )

    return st.recursive(leaves, extend, max_leaves=8)


@given(expressions(), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_round_trip_evaluates_identically(text, seed):
    tree = parse(text)
    again = parse(to_text(tree))
    rng = np.random.default_rng(seed)
    for z in rng.normal(size=20) + 1j * rng.normal(size=20):
        try:
            a = tree.evaluate(complex(z))
        except ZeroDivisionError:
            with pytest.raises(ZeroDivisionError):
                again.evaluate(complex(z))
            continue
        b = again.evaluate(complex(z))
        if not (math.isfinite(abs(a)) and math.isfinite(abs(b))):
            continue
        assert abs(a - b) <= 1e-12 * max(abs(a), 1e-300)
