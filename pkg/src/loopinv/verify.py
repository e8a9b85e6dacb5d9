"""Decide invariant questions for a loop and a finite set of rational polynomials."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from flint import fmpz_mod_ctx, fmpz_mod_mat
from gmpy2 import next_prime

from .closure import ClosureResult, closure
from .groebner import GroebnerBasis, ResourceLimitError, buchberger, radical_membership
from .lattice import DEFAULT_CAP
from .linalg import Loop
from .poly import MultiPoly

EXACT_LIMIT = 64
FINGERPRINT_PRIMES = 20
DEFAULT_TUPLE_LIMIT = 100_000
DEFAULT_MAX_ITER = 32


@dataclass
class VerifyVerdict:
    answer: bool
    mode: str
    witness: object = None
    caveat: str | None = None
    index: int | None = None  # stabilization index for the backward chain

    def __bool__(self) -> bool:
        return self.answer


# --------------------------------------------------------------------------- orbit points


def _exact_point_check(S: Sequence[MultiPoly], loop: Loop, n: int) -> bool:
    pt = list(loop.point(n))
    return all(p.evaluate(pt) == 0 for p in S)


def _modular_point(loop: Loop, n: int, p: int) -> list[int] | None:
    """``M^n alpha mod p``, or None when a denominator vanishes mod p."""
    dens = [x.denominator for row in loop.update for x in row] + [x.denominator for x in loop.init]
    if any(dd % p == 0 for dd in dens):
        return None
    ctx = fmpz_mod_ctx(p)
    d = loop.dim
    M = fmpz_mod_mat(d, d, [x.numerator * pow(x.denominator, -1, p) % p for row in loop.update for x in row], ctx)
    a = fmpz_mod_mat(d, 1, [x.numerator * pow(x.denominator, -1, p) % p for x in loop.init], ctx)
    v = (M**n) * a
    return [int(v[i, 0]) for i in range(d)]


def _modular_eval(poly: MultiPoly, point: Sequence[int], p: int) -> int | None:
    acc = 0
    for m, c in poly.terms.items():
        if c.denominator % p == 0:
            return None
        t = c.numerator * pow(c.denominator, -1, p)
        for x, e in zip(point, m):
            if e:
                t = t * pow(x, e, p)
        acc = (acc + t) % p
    return acc


def orbit_point_check(S: Sequence[MultiPoly], loop: Loop, n: int, primes: int = FINGERPRINT_PRIMES,
                      rng: random.Random | None = None) -> bool:
    """Do all polynomials of ``S`` vanish at ``M^n alpha``?

    Exact for ``n <= 64``.  Beyond that, residues modulo random 62-bit primes are
    computed first: any nonzero residue proves the answer is False.  If every
    residue is zero the answer is confirmed by exact evaluation.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    S = [p.to_rational() for p in S]
    if n <= EXACT_LIMIT:
        return _exact_point_check(S, loop, n)
    rng = rng or random.Random(n)
    for _ in range(primes):
        p = int(next_prime(rng.getrandbits(62) | (1 << 61)))
        pt = _modular_point(loop, n, p)
        if pt is None:
            continue
        for poly in S:
            r = _modular_eval(poly, pt, p)
            if r:
                return False
    return _exact_point_check(S, loop, n)


# --------------------------------------------------------------------------- inductive


def _rational(S: Sequence[MultiPoly], d: int) -> list[MultiPoly]:
    out = []
    for p in S:
        if not p.is_rational():
            raise ValueError("candidate invariants must have rational coefficients")
        if len(p.vars) != d:
            raise ValueError(f"polynomials must use exactly {d} loop variables")
        out.append(p.to_rational())
    return [p for p in out if not p.is_zero()]


def verify_inductive(S: Sequence[MultiPoly], loop: Loop) -> VerifyVerdict:
    """``alpha`` satisfies ``S`` and ``P(M x)`` lies in the radical of ``S`` for every ``P``."""
    S = _rational(S, loop.dim)
    for p in S:
        if p.evaluate(list(loop.init)) != 0:
            return VerifyVerdict(False, "inductive", witness=("initial", str(p)))
    if not S:
        return VerifyVerdict(True, "inductive")
    gb = buchberger(S)
    for p in S:
        q = p.substitute_linear(loop.update)
        if not radical_membership(q, S, gb):
            return VerifyVerdict(False, "inductive", witness=("step", str(p)))
    return VerifyVerdict(True, "inductive")


# --------------------------------------------------------------------------- invariant / strongest


def verify_invariant(S: Sequence[MultiPoly], loop: Loop, cr: ClosureResult | None = None,
                     lattice_cap: int = DEFAULT_CAP) -> VerifyVerdict:
    """Does the whole orbit lie in ``V(S)``?"""
    S = _rational(S, loop.dim)
    cr = cr or closure(loop, lattice_cap=lattice_cap)
    caveat = cr.caveat
    for i, pt in enumerate(cr.isolated_points):
        for p in S:
            if p.evaluate(list(pt)) != 0:
                return VerifyVerdict(False, "invariant", witness=(i, str(p)), caveat=caveat)
    for p in S:
        if not cr.vanishes_on_main(p):
            n = _first_violation(p, loop, len(cr.isolated_points))
            # a violating orbit point is a certificate regardless of the lattice cap
            return VerifyVerdict(False, "invariant", witness=(n, str(p)),
                                 caveat=None if n is not None else caveat)
    return VerifyVerdict(True, "invariant", caveat=caveat)


def _first_violation(p: MultiPoly, loop: Loop, start: int, limit: int = 200) -> int | None:
    for n, pt in enumerate(loop.orbit(start + limit)):
        if n >= start and p.evaluate(list(pt)) != 0:
            return n
    return None


def verify_strongest(S: Sequence[MultiPoly], loop: Loop, cr: ClosureResult | None = None,
                     tuple_limit: int = DEFAULT_TUPLE_LIMIT, lattice_cap: int = DEFAULT_CAP) -> VerifyVerdict:
    """Is ``V(S)`` exactly the orbit closure?

    The inclusion of the orbit is :func:`verify_invariant`.  For the reverse
    inclusion every product taking one generator from each isolated point
    ideal and one from the main component must vanish on ``V(S)``.
    """
    S = _rational(S, loop.dim)
    cr = cr or closure(loop, lattice_cap=lattice_cap)
    inv = verify_invariant(S, loop, cr)
    if not inv.answer:
        return VerifyVerdict(False, "strongest", witness=("orbit not contained", inv.witness), caveat=inv.caveat)
    if not S:
        # V(S) is everything; equal only if the closure is everything too
        ok = all(g.is_zero() for g in cr.main_gens) and not cr.isolated_points
        return VerifyVerdict(ok, "strongest", witness=None if ok else "V(S) is the whole space", caveat=cr.caveat)
    points = cr.point_ideals()
    main = _main_components(cr)
    count = len(main)
    for pi in points:
        count *= len(pi)
    if count > tuple_limit:
        raise ResourceLimitError(f"{count} generator tuples exceed the limit {tuple_limit}")
    gb = buchberger(S)
    if gb.is_unit():
        # empty variety cannot contain the nonempty orbit; unreachable after the check above
        return VerifyVerdict(False, "strongest", witness="V(S) is empty", caveat=cr.caveat)
    cache: dict = {}
    for choice in product(*points):
        base = MultiPoly.const(S[0].vars, 1)
        for g in choice:
            base = base * g
        for h in main:
            f = base * h
            key = tuple(sorted(f.terms.items()))
            if key not in cache:
                cache[key] = radical_membership(f, S, gb)
            if not cache[key]:
                return VerifyVerdict(False, "strongest", witness="V(S) has points outside the orbit closure",
                                     caveat=cr.caveat)
    return VerifyVerdict(True, "strongest", caveat=cr.caveat)


def _main_components(cr: ClosureResult) -> list[MultiPoly]:
    """Rational polynomials cutting out the main component (power-basis parts of its generators)."""
    out = []
    for g in cr.main_gens:
        parts = [g.to_rational()] if g.is_rational() else g.components(cr.field)
        out.extend(p for p in parts if not p.is_zero())
    return out or [MultiPoly(cr.vars)]


# --------------------------------------------------------------------------- backward chain


def chain_backward(S: Sequence[MultiPoly], loop: Loop, max_iter: int = DEFAULT_MAX_ITER) -> VerifyVerdict:
    """Grow ``I_i = <P(M^j x) : P in S, j <= i>`` until it stabilizes; answer ``alpha in V(I)``.

    The stabilization index is the least ``k`` with ``I_k == I_(k+1)``.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    S = _rational(S, loop.dim)
    if not S:
        return VerifyVerdict(True, "chain", index=0)
    gens = list(S)
    current = list(S)
    gb = buchberger(gens)
    alpha = list(loop.init)
    for i in range(max_iter):
        current = [p.substitute_linear(loop.update) for p in current]
        new = [p for p in current if not p.is_zero() and not gb.contains(p)]
        if not new:
            return _chain_verdict(gb, alpha, i)
        gens.extend(new)
        gb = buchberger(gens)
    # not stable yet: the orbit may still be shown to leave V(S)
    for p in gens:
        if p.evaluate(alpha) != 0:
            return VerifyVerdict(False, "chain", witness=str(p), index=None)
    raise ResourceLimitError(f"backward chain did not stabilize within {max_iter} steps", partial=max_iter)


def _chain_verdict(gb: GroebnerBasis, alpha: list, index: int) -> VerifyVerdict:
    for g in gb.basis:
        if g.evaluate(alpha) != 0:
            return VerifyVerdict(False, "chain", witness=str(g), index=index)
    return VerifyVerdict(True, "chain", index=index)
