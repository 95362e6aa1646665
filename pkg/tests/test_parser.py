"""Tests for .ring documents, polynomial/label parsing and rendering."""

from fractions import Fraction

import pytest

from kahlerlab.parser import (
    DeltaLabel,
    JetLabel,
    PlainLabel,
    RingParseError,
    SymLabel,
    make_ringspec,
    parse_label,
    parse_poly,
    parse_presentation_doc,
    parse_ringspec,
    ring_statements,
)
from kahlerlab.poly import Polynomial, format_polynomial

CUSP_TEXT = """
# plane curve with a cusp at the origin
vars = [x, y];
weights = [2, 3];
ideal = [y^2 - x^3];
assume_domain = true;
"""


def test_parse_cusp_ring():
    ring = parse_ringspec(CUSP_TEXT)
    assert ring.variables == ("x", "y")
    assert ring.weights == (2, 3)
    assert len(ring.ideal) == 1
    assert ring.assume_domain and ring.is_domain()
    assert ring.homogeneous is True
    f = ring.ideal[0]
    assert f.coefficient((0, 2)) == 1 and f.coefficient((3, 0)) == -1


def test_parse_polynomial_ring():
    ring = parse_ringspec("vars = [x];\nideal = [];\n")
    assert ring.variables == ("x",)
    assert ring.weights is None
    assert ring.ideal == ()
    assert ring.is_domain()  # no ideal, domain without assuming anything


def test_ring_round_trip():
    ring = parse_ringspec(CUSP_TEXT)
    text = "\n".join(ring_statements(ring))
    assert parse_ringspec(text) == ring


def test_statement_grammar_errors():
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x; y];")
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x]; vars = [y];")  # duplicate statement
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x]")  # missing semicolon
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x]; mystery = [1];")
    with pytest.raises(RingParseError):
        parse_ringspec("ideal = [x];")  # vars required
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x, x];")
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x, y]; weights = [1];")
    with pytest.raises(RingParseError):
        parse_ringspec("vars = [x]; weights = [0];")


def test_parse_error_carries_position():
    try:
        parse_ringspec("vars = [x];\nideal = [x^^2];\n")
    except RingParseError as err:
        assert err.line == 2
        assert err.col > 0
    else:
        raise AssertionError("expected a parse error")


def test_parse_poly_basics():
    ring = make_ringspec(("x", "y"))
    p = parse_poly("-3*x^2*y + 2*y", ring)
    assert p.coefficient((2, 1)) == -3 and p.coefficient((0, 1)) == 2
    assert parse_poly("1/2*x - 1/2*x", ring).is_zero()
    assert parse_poly("(x + y)^2", ring) == parse_poly("x^2 + 2*x*y + y^2", ring)
    assert parse_poly("-x", ring) == -parse_poly("x", ring)
    assert parse_poly("7", ring).constant_term() == 7
    assert parse_poly("x - - y", ring) == parse_poly("x + y", ring)


def test_parse_poly_rejects_malformed_input():
    ring = make_ringspec(("x", "y"))
    for bad in ("x^^2", "x +", "2x", "x*", "(x", "x)", "z", "x^y", "", "x//2"):
        with pytest.raises(RingParseError):
            parse_poly(bad, ring)


def test_poly_format_round_trip():
    import random

    ring = make_ringspec(("x", "y"))
    rng = random.Random(11)
    for _ in range(80):
        terms = {}
        for _ in range(rng.randrange(0, 6)):
            k = (rng.randrange(0, 5), rng.randrange(0, 5))
            terms[k] = Fraction(rng.randrange(-8, 9), rng.randrange(1, 5))
        p = Polynomial(("x", "y"), terms)
        assert parse_poly(format_polynomial(p), ring) == p


def test_labels_render_and_parse():
    ring = make_ringspec(("x", "y"))
    d = DeltaLabel(2, (2, 0), ring.variables)
    assert d.render() == "d2(x^2)"
    assert parse_label("d2(x^2)", ring) == d

    j = JetLabel(1, DeltaLabel(1, (1, 0), ring.variables), (0, 1), ring.variables)
    assert j.render() == "D1[d1(x)](y)"
    assert parse_label("D1[d1(x)](y)", ring) == j

    base = JetLabel(1, PlainLabel("e"), (0, 0), ring.variables)
    assert base.render() == "D1[e](1)"
    assert parse_label("D1[e](1)", ring) == base


def test_sym_label_is_unordered():
    ring = make_ringspec(("x", "y"))
    a = DeltaLabel(1, (1, 0), ring.variables)
    b = DeltaLabel(1, (0, 1), ring.variables)
    assert SymLabel(a, b) == SymLabel(b, a)
    assert SymLabel(a, b).render() == "s(d1(x),d1(y))"
    assert parse_label("s(d1(y),d1(x))", ring) == SymLabel(a, b)
    assert hash(SymLabel(a, b)) == hash(SymLabel(b, a))


def test_label_parse_errors():
    ring = make_ringspec(("x", "y"))
    for bad in ("d2(2*x)", "d2(x+y)", "s(d1(x))", "D1[d1(x)]", "d2()", "3"):
        with pytest.raises(RingParseError):
            parse_label(bad, ring)


def test_presentation_document_parses():
    text = CUSP_TEXT + """
generators = [d1(x), d1(y)];
relations = [[-3*x^2, 2*y]];
"""
    ring, labels, rows = parse_presentation_doc(text)
    assert [g.render() for g in labels] == ["d1(x)", "d1(y)"]
    assert len(rows) == 1 and len(rows[0]) == 2
    assert rows[0][0] == parse_poly("-3*x^2", ring)


def test_presentation_document_row_length_checked():
    text = CUSP_TEXT + """
generators = [d1(x), d1(y)];
relations = [[x]];
"""
    with pytest.raises(RingParseError):
        parse_presentation_doc(text)


def test_comments_and_whitespace_ignored():
    ring = parse_ringspec("vars = [x];  # trailing comment\nideal = [\n  # inner\n];")
    assert ring.variables == ("x",)
