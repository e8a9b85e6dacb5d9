from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, strategies as st

from loopinv.linalg import (Loop, Matrix, binomial_check, build_r, convenient_u, fingerprint, jordan_decomposition,
                            only_powers_closed_form, stirling_coeffs)
from loopinv.numbers import RATIONALS

from conftest import CORPUS, NILPOTENT_LOOP, CYCLOTOMIC_LOOP, QUADRATIC_LOOP, FIB

EXAMPLES = [FIB, NILPOTENT_LOOP, CYCLOTOMIC_LOOP, QUADRATIC_LOOP]


def _check_decomposition(loop):
    jd = jordan_decomposition(loop)
    M = loop.matrix(jd.field)
    assert jd.P @ jd.J @ jd.Pinv == M
    assert jd.P @ jd.Pinv == Matrix.identity(jd.field, loop.dim)
    return jd


@pytest.mark.parametrize("loop", EXAMPLES, ids=["fib", "nilpotent", "cyclotomic", "quadratic"])
def test_examples_decompose(loop):
    _check_decomposition(loop)


@pytest.mark.parametrize("i", range(len(CORPUS)))
def test_corpus_decomposes(i):
    loop = CORPUS[i]
    jd = _check_decomposition(loop)
    cd = convenient_u(jd)
    K = jd.field
    # U P^-1 M^n0 alpha is the fingerprint
    start = [K(c) for c in loop.point(jd.isolated_count)]
    assert cd.U @ jd.Pinv @ start == [K(b) for b in cd.beta]
    assert cd.U @ cd.Uinv == Matrix.identity(K, loop.dim)
    # U commutes with the nonzero part of J
    assert cd.U @ jd.Jtilde == jd.Jtilde @ cd.U


def test_nilpotent_loop_structure():
    jd = jordan_decomposition(NILPOTENT_LOOP)
    sizes = [(b.size, b.is_zero) for b in jd.blocks]
    assert sizes == [(3, True), (3, False)]
    assert jd.isolated_count == 3
    cd = convenient_u(jd)
    rd = build_r(jd, cd)
    K = jd.field
    expected = [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 8, 2, 0], [0, 0, 0, 0, 2, 0], [0, 0, 0, 0, 0, 1]]
    assert rd.R == Matrix(K, [[K(x) for x in row] for row in expected])


def test_cyclotomic_loop_fingerprint_and_r():
    jd = jordan_decomposition(CYCLOTOMIC_LOOP)
    cd = convenient_u(jd)
    assert cd.beta == [1, 1, 0, 1, 0, 1]
    rd = build_r(jd, cd)
    lams = [b.eigenvalue for b in jd.blocks]
    omega2, omega = lams[2], lams[3]
    assert omega * omega == omega2 and omega**3 == 1
    diag = [rd.R.rows[i][i] for i in range(6)]
    assert diag == [1, 1, omega2, 1, omega, 1]


def test_fingerprint():
    assert fingerprint([3, 0, 5, 0, 0, 2], [2, 3, 1]) == [1, 0, 1, 0, 0, 1]
    assert fingerprint([0, 0, 1, 0], [2, 2]) == [0, 0, 1, 0]


@pytest.mark.parametrize("k", range(1, 7))
def test_stirling_identity(k):
    for n in range(21):
        assert binomial_check(k, n)
        assert n**k == sum(c * comb(n, i + 1) for i, c in enumerate(stirling_coeffs(k)))


@given(st.integers(1, 12), st.integers(0, 60))
def test_stirling_identity_property(k, n):
    assert binomial_check(k, n)


def test_r_gives_only_powers_form():
    # single Jordan block of size 4 for eigenvalue 3
    loop = Loop([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 3]], [1, 2, -1, 5])
    jd = jordan_decomposition(loop)
    cd = convenient_u(jd)
    rd = build_r(jd, cd)
    K = jd.field
    beta = [K(b) for b in cd.beta]
    (blk,) = jd.blocks
    k = cd.k[0]
    assert k == 4
    for n in range(12):
        lhs = rd.R @ (jd.Jtilde ** n) @ beta
        assert lhs == only_powers_closed_form(blk.eigenvalue, blk.size, k, n)


@st.composite
def rational_matrices(draw, n=3):
    entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return [[draw(entries) for _ in range(n)] for _ in range(n)]


@given(rational_matrices())
def test_inverse_over_rationals(rows):
    A = Matrix(RATIONALS, [[RATIONALS(x) for x in r] for r in rows])
    if A.rank() < 3:
        with pytest.raises(Exception):
            A.inverse()
        return
    assert A @ A.inverse() == Matrix.identity(RATIONALS, 3)


@given(rational_matrices())
def test_kernel_vectors_are_annihilated(rows):
    A = Matrix(RATIONALS, [[RATIONALS(x) for x in r] for r in rows])
    ker = A.kernel()
    assert len(ker) == 3 - A.rank()
    for v in ker:
        assert all(x.is_zero() for x in A @ v)


def test_loop_points():
    loop = Loop([[1, 1], [1, 0]], [1, 0])
    assert loop.orbit(6) == [(1, 0), (1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]
    assert loop.point(30) == (F(1346269), F(832040))
