import random

import pytest

from loopinv import Loop, closure
from loopinv.groebner import ResourceLimitError
from loopinv.poly import MultiPoly, parse_poly, x_vars
from loopinv.verify import (chain_backward, orbit_point_check, verify_inductive, verify_invariant,
                            verify_strongest)

from conftest import CORPUS, FIB, random_loop

X3 = x_vars(3)
WEAK = [parse_poly("(x2^2 + x1*x2 - x1^2)^2 - x3^2", X3)]
STRONG = [parse_poly("x2^2 + x1*x2 - x1^2 - x3", X3), parse_poly("x3^2 - 1", X3)]


def test_fibonacci_triple():
    assert verify_inductive(WEAK, FIB).answer
    assert verify_invariant(WEAK, FIB).answer
    assert not verify_strongest(WEAK, FIB).answer
    assert verify_strongest(STRONG, FIB).answer


def test_fibonacci_chain_index():
    v = chain_backward(STRONG, FIB)
    assert v.answer and v.index == 0


def test_invariant_but_not_inductive():
    loop = Loop([[-1]], [1])
    S = [parse_poly("(x1 - 1)*(x1 + 1)*(x1 - 2)", x_vars(1))]
    assert verify_invariant(S, loop).answer
    assert not verify_inductive(S, loop).answer
    v = chain_backward(S, loop)
    assert v.answer and v.index == 1


def test_not_invariant_has_witness():
    loop = Loop([[2, 0], [0, 3]], [1, 1])
    S = [parse_poly("x1 - x2", x_vars(2))]
    v = verify_invariant(S, loop)
    assert not v.answer and v.witness[0] == 1
    c = chain_backward(S, loop)
    assert not c.answer and c.index == 1


def test_identity_with_zero_start():
    loop = Loop([[1, 0], [0, 1]], [0, 0])
    v = chain_backward([parse_poly("x1", x_vars(2))], loop)
    assert v.answer and v.index == 0


def test_chain_resource_limit():
    # x1 - 1 pulled back along a 3-cycle needs two steps to stabilise
    loop = Loop([[0, 0, 1], [1, 0, 0], [0, 1, 0]], [1, 1, 1])
    S = [parse_poly("x1 - 1", X3)]
    with pytest.raises(ResourceLimitError):
        chain_backward(S, loop, max_iter=1)
    assert chain_backward(S, loop, max_iter=4).answer


def _random_instances(n, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        loop = random_loop(rng, max_dim=3)
        xs = x_vars(loop.dim)
        kind = len(out) % 3
        terms = {tuple(rng.randint(0, 1) for _ in xs): rng.randint(-2, 2) for _ in range(3)}
        p = MultiPoly(xs, terms)
        p = p - p.evaluate(list(loop.init))  # alpha always satisfies it
        cr = closure(loop)
        rational = [g.to_rational() for g in cr.main_gens if g.is_rational()]
        if kind == 0 or not rational:
            S = [p] if not p.is_zero() else [MultiPoly.var(xs, 0) - loop.init[0]]
        elif kind == 1:
            S = rational[:2]
        else:
            S = [rational[0] * p] if not p.is_zero() else rational[:1]
        out.append((loop, S, cr))
    return out


INSTANCES = _random_instances(60)


def test_chain_and_invariant_agree():
    answers = []
    for loop, S, cr in INSTANCES:
        inv = verify_invariant(S, loop, cr)
        ch = chain_backward(S, loop)
        assert inv.answer == ch.answer, (loop, [str(p) for p in S])
        answers.append(inv.answer)
    assert len(answers) >= 50
    assert any(answers) and not all(answers)


@pytest.mark.parametrize("i", range(0, len(CORPUS), 3))
def test_modular_point_check_matches_exact(i):
    loop = CORPUS[i]
    xs = x_vars(loop.dim)
    cr = closure(loop)
    rational = [g.to_rational() for g in cr.main_gens if g.is_rational()]
    candidates = [rational, [MultiPoly.var(xs, 0) - 1], [MultiPoly.var(xs, 0) ** 2 - MultiPoly.var(xs, loop.dim - 1)]]
    for S in candidates:
        for n in (0, 10, 65, 90, 130):
            exact = all(p.evaluate(list(loop.point(n))) == 0 for p in S)
            assert orbit_point_check(S, loop, n) == exact


def test_point_check_far_out():
    S = [parse_poly("(x2^2 + x1*x2 - x1^2)^2 - 1", X3)]
    assert orbit_point_check(S, FIB, 1000)
    assert not orbit_point_check([parse_poly("x1 - x2", X3)], FIB, 1000)


def test_rejects_irrational_candidates():
    from loopinv.numbers import NumberField, upoly
    K = NumberField(upoly([-2, 0, 1]))
    S = [parse_poly("x1 - t", X3, K)]
    with pytest.raises(ValueError):
        verify_invariant(S, FIB)
