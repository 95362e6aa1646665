"""Unit tests for exact polynomial arithmetic and monomial orders."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kahlerlab.poly import (
    ExponentOverflowError,
    MonomialOrder,
    Polynomial,
    doubled_variables,
    format_polynomial,
    monomial_text,
    partial_derivative,
    shift_components,
    taylor_coefficient,
    truncated_shift,
)

XY = ("x", "y")


def P(text_terms):
    """Tiny builder: dict {(a, b): coeff} -> Polynomial in x, y."""
    return Polynomial(XY, {k: Fraction(v) for k, v in text_terms.items()})


def test_zero_and_constants():
    z = Polynomial.zero(XY)
    assert z.is_zero() and z.is_constant()
    one = Polynomial.const(XY, 1)
    assert one.constant_term() == 1
    assert (one - one).is_zero()
    assert Polynomial.const(XY, 0) == z


def test_normalization_drops_zero_coefficients():
    p = Polynomial(XY, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
    assert (1, 0) not in p.terms
    assert p == P({(0, 1): 2})


def test_arithmetic_matches_naive_model():
    import random

    rng = random.Random(7)

    def random_poly():
        terms = {}
        for _ in range(rng.randrange(0, 5)):
            k = (rng.randrange(0, 4), rng.randrange(0, 4))
            terms[k] = Fraction(rng.randrange(-5, 6), rng.randrange(1, 4))
        return Polynomial(XY, terms)

    def naive_mul(a, b):
        out = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                k = (ka[0] + kb[0], ka[1] + kb[1])
                out[k] = out.get(k, Fraction(0)) + ca * cb
        return Polynomial(XY, out)

    for _ in range(120):
        a, b = random_poly(), random_poly()
        assert a * b == naive_mul(a, b)
        assert a + b - b == a
        assert (a - a).is_zero()
        assert a * (b + b) == a * b + a * b


def test_pow_and_scale():
    x = Polynomial.variable(XY, "x")
    y = Polynomial.variable(XY, "y")
    p = x + y
    assert p ** 2 == x * x + x * y * 2 + y * y
    assert p.scale(Fraction(1, 2)) + p.scale(Fraction(1, 2)) == p


def test_exponent_overflow_guard():
    with pytest.raises(ExponentOverflowError):
        Polynomial(("x",), {(10 ** 9 + 1,): Fraction(1)})
    big = Polynomial(("x",), {(10 ** 9 - 1,): Fraction(1)})
    with pytest.raises(ExponentOverflowError):
        big * big


def test_immutability():
    p = P({(1, 0): 1})
    with pytest.raises(AttributeError):
        p.terms = {}


def test_partial_derivative_and_taylor():
    # h = x^3*y + 2y^2
    h = P({(3, 1): 1, (0, 2): 2})
    assert partial_derivative(h, 0) == P({(2, 1): 3})
    assert partial_derivative(h, 1, 2) == P({(0, 0): 4})
    # taylor gamma=(2,1): d^3 h / (dx^2 dy) / (2! * 1!) = 3x
    assert taylor_coefficient(h, (2, 1)) == P({(1, 0): 3})
    assert taylor_coefficient(h, (0, 0)) == h


def test_shift_components_table():
    h = P({(3, 0): 1})  # x^3
    table = shift_components(h, 2)
    assert set(table) == {(1, 0), (2, 0)}
    assert table[(1, 0)] == P({(2, 0): 3})
    assert table[(2, 0)] == P({(1, 0): 3})
    with_const = shift_components(h, 2, include_constant=True)
    assert with_const[(0, 0)] == h


def test_truncated_shift_reference_values():
    # x^3 at q=2 contributes 3x^2*u + 3x*u^2 and nothing else
    h = Polynomial(("x",), {(3,): Fraction(1)})
    shifted = truncated_shift(h, 2)
    assert set(shifted.variables) == {"x", "u"}
    u_idx = shifted.variables.index("u")
    x_idx = shifted.variables.index("x")

    def mono(xe, ue):
        k = [0, 0]
        k[x_idx], k[u_idx] = xe, ue
        return tuple(k)

    assert shifted.terms == {mono(2, 1): Fraction(3), mono(1, 2): Fraction(3)}

    # y^2 at q=2 over (x, y): 2y*v + v^2
    g = P({(0, 2): 1})
    shifted = truncated_shift(g, 2)
    names = shifted.variables
    v_idx = names.index("v")
    y_idx = names.index("y")
    expected = {}
    k = [0] * len(names)
    k[y_idx], k[v_idx] = 1, 1
    expected[tuple(k)] = Fraction(2)
    k = [0] * len(names)
    k[v_idx] = 2
    expected[tuple(k)] = Fraction(1)
    assert shifted.terms == expected


def test_doubled_variables_avoid_collisions():
    assert doubled_variables(("x", "y")) == ("x", "y", "u", "v")
    full = doubled_variables(("u", "v"))
    assert full[:2] == ("u", "v")
    assert len(set(full)) == 4


def test_weighted_order_tie_break():
    # under weights (2, 3): y^2 and x^3 share degree 6 and y^2 wins
    order = MonomialOrder("weighted", (2, 3))
    assert order.key((0, 2)) > order.key((3, 0))
    p = P({(0, 2): 1, (3, 0): -1})
    assert order.leading_term(p) == ((0, 2), Fraction(1))


def test_degrevlex_reads_from_first_variable():
    order = MonomialOrder("degrevlex")
    # same total degree: the monomial with smaller first exponent is larger
    assert order.key((0, 2)) > order.key((1, 1)) > order.key((2, 0))


def test_lex_order():
    order = MonomialOrder("lex")
    assert order.key((1, 0)) > order.key((0, 5))


def test_homogeneous_degree():
    w = (2, 3)
    f = P({(0, 2): 1, (3, 0): -1})
    assert f.homogeneous_degree(w) == 6
    assert (f + P({(1, 0): 1})).homogeneous_degree(w) is None
    assert Polynomial.zero(XY).homogeneous_degree(w) is None


def test_format_polynomial_canonical_text():
    f = P({(0, 2): 1, (3, 0): -1})
    order = MonomialOrder("weighted", (2, 3))
    assert format_polynomial(f, order) == "y^2 - x^3"
    assert format_polynomial(P({(2, 1): -3, (0, 1): 2})) == "-3*x^2*y + 2*y"
    assert format_polynomial(Polynomial.zero(XY)) == "0"
    assert format_polynomial(P({(0, 0): -1})) == "-1"
    assert monomial_text((0, 0), XY) == "1"
    assert monomial_text((2, 1), XY) == "x^2*y"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5),
                          st.integers(-9, 9)), max_size=6))
def test_multiplication_commutes(triples):
    a = Polynomial(XY, {(i, j): Fraction(c) for i, j, c in triples[:3]})
    b = Polynomial(XY, {(i, j): Fraction(c) for i, j, c in triples[3:]})
    assert a * b == b * a
    assert a * Polynomial.const(XY, 1) == a
