from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from loopinv.numbers import NumberField, upoly
from loopinv.poly import MultiPoly, ParseError, infer_variables, parse_ideal, parse_poly, to_text, x_vars

XS = x_vars(3)
SQRT2 = NumberField(upoly([-2, 0, 1]))

coeffs = st.fractions(min_value=-50, max_value=50, max_denominator=9)
monos = st.tuples(*[st.integers(0, 3)] * 3)


@st.composite
def polys(draw, field=None):
    terms = draw(st.dictionaries(monos, coeffs, max_size=6))
    if field is not None:
        terms = {m: field([c, draw(coeffs)]) for m, c in terms.items()}
    return MultiPoly(XS, terms)


@given(polys())
def test_text_roundtrip_rational(p):
    assert parse_poly(to_text(p), XS) == p


@given(polys(SQRT2))
def test_text_roundtrip_algebraic(p):
    assert parse_poly(to_text(p), XS, SQRT2) == p


@given(polys(), polys())
def test_arithmetic_matches_evaluation(p, q):
    pt = [F(1, 2), F(-3), F(2, 5)]
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p - q).evaluate(pt) == p.evaluate(pt) - q.evaluate(pt)


@given(polys())
def test_normalized_is_scalar_multiple(p):
    n = p.normalized()
    if p.is_zero():
        assert n.is_zero()
        return
    assert all(c.denominator == 1 for c in n.terms.values())
    ratios = {n.terms[m] / p.terms[m] for m in p.terms}
    assert len(ratios) == 1 and ratios.pop() != 0


def test_parse_examples():
    fib = parse_poly("x2^2 + x1*x2 - x1^2 - x3", XS)
    assert fib.evaluate([1, 0, -1]) == 0
    assert parse_poly("1", XS) == MultiPoly.const(XS, 1)
    b = parse_poly("x1^2 - x2^2", XS)
    assert len(b.terms) == 2
    assert parse_poly("(x1 + 1/2)**2", XS) == parse_poly("x1^2 + x1 + 1/4", XS)
    assert parse_poly("-x1*-x2", XS) == parse_poly("x1*x2", XS)


@pytest.mark.parametrize("bad", ["x1 x2", "x1^", "x4 + 1", "2*(x1", "x1 + ", "x1^-1", "y"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, XS)


def test_parse_ideal_comments_and_blanks():
    text = "# header\n x1 - x2   # trailing\n\n x3^2 - 1\n"
    gens = parse_ideal(text, XS)
    assert [to_text(g) for g in gens] == ["x1 - x2", "x3^2 - 1"]


def test_infer_variables():
    assert infer_variables(["x1 + x3"]) == ("x1", "x2", "x3")
    assert infer_variables(["x1"], dim=4) == x_vars(4)


def test_substitute_linear():
    p = parse_poly("x1*x2", x_vars(2))
    q = p.substitute_linear([[1, 1], [0, 1]])
    assert q == parse_poly("(x1 + x2)*x2", x_vars(2))


def test_components_recover_polynomial():
    t = SQRT2.gen
    p = MultiPoly(XS, {(1, 0, 0): t + 1, (0, 0, 0): 3 * t})
    parts = p.components(SQRT2)
    assert parts[0] == parse_poly("x1", XS) and parts[1] == parse_poly("x1 + 3", XS)
