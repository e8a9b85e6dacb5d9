from hypothesis import given, strategies as st

from loopinv.groebner import (GREVLEX, LEX, buchberger, eliminate, ideal_membership, is_empty_variety,
                              radical_membership, spoly_reduces_to_zero)
from loopinv.poly import MultiPoly, parse_poly, x_vars

XS = x_vars(3)


def P(s, xs=XS):
    return parse_poly(s, xs)


def test_linear_system():
    gb = buchberger([P("x1 - x2"), P("x1 + x2")])
    assert sorted(map(str, gb.basis)) == ["x1", "x2"]


def test_unit_ideal():
    assert buchberger([P("x1"), P("x1 - 1")]).is_unit()
    assert is_empty_variety([P("x1^2 + 1"), P("x1")])


def test_radical_examples():
    assert radical_membership(P("x1"), [P("x1^2")])
    assert not ideal_membership(P("x1"), buchberger([P("x1^2")]))
    assert radical_membership(P("x1 - 1"), [P("(x1 - 1)^3"), P("x2")])
    assert not radical_membership(P("x1"), [P("x1*x2")])
    assert radical_membership(P("x1*x2"), [P("x1^2"), P("x2^3")])


def test_elimination_of_parametrisation():
    # (t, t^2, t^3) eliminates to the twisted cubic
    names = ("t",) + XS
    gens = [parse_poly(s, names) for s in ["x1 - t", "x2 - t^2", "x3 - t^3"]]
    elim = eliminate(gens, 1)
    for f in (P("x2 - x1^2"), P("x3 - x1*x2")):
        assert radical_membership(f, elim)
    assert all(not g.is_zero() for g in elim)


def test_lex_basis_is_triangular():
    gb = buchberger([P("x1^2 + x2^2 - 1"), P("x1 - x2")], LEX)
    assert any(g.used_vars() == {1} for g in gb.basis)


small = st.integers(-3, 3)
monos = st.tuples(*[st.integers(0, 2)] * 3)
polys = st.dictionaries(monos, small, min_size=1, max_size=4).map(lambda t: MultiPoly(XS, t))


@given(st.lists(polys, min_size=1, max_size=3))
def test_buchberger_criterion_holds(gens):
    gb = buchberger(gens)
    assert spoly_reduces_to_zero(gb)
    for g in gens:
        assert gb.contains(g)


@given(st.lists(polys, min_size=1, max_size=3), st.lists(polys, min_size=3, max_size=3))
def test_combinations_are_members(gens, cofactors):
    f = MultiPoly(XS)
    for g, c in zip(gens, cofactors):
        f = f + g * c
    assert buchberger(gens).contains(f)


@given(polys, polys)
def test_square_roots_in_radical(g, h):
    # (h*g)^2 = h^2 g^2 lies in <h^2 g>, so h*g lies in the radical
    assert radical_membership(h * g, [h * h * g])


def test_grevlex_default():
    assert buchberger([P("x1")]).order == GREVLEX
