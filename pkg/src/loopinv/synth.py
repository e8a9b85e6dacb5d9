"""Bit-bounded loop synthesis: enumerate small loops and keep one the verifier accepts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .closure import closure
from .groebner import ResourceLimitError
from .lattice import DEFAULT_CAP
from .linalg import Loop, convenient_u, jordan_decomposition
from .numbers import is_root_of_unity
from .poly import MultiPoly
from .verify import VerifyVerdict, verify_invariant, verify_strongest

DEFAULT_CANDIDATE_LIMIT = 2_000_000


def bitsize(q: Fraction) -> int:
    """``ceil(log2(max(|p|, 1)) + log2(q))`` for ``q = p/q`` in lowest terms; zero has bitsize 0."""
    q = Fraction(q)
    if q == 0:
        return 0
    num, den = abs(q.numerator), q.denominator
    # smallest b with num * den <= 2**b
    prod_ = num * den
    b = prod_.bit_length() - 1
    return b if 1 << b == prod_ else b + 1


def bounded_values(bits: int, domain: str = "integers") -> list[Fraction]:
    """All values of bitsize at most ``bits``, ordered 0, 1, -1, 2, -2, ... (then by height)."""
    if bits < 0:
        raise ValueError("bit bound must be nonnegative")
    limit = 1 << bits
    vals = set()
    if domain == "integers":
        vals = {Fraction(p) for p in range(-limit, limit + 1)}
    elif domain == "rationals":
        for den in range(1, limit + 1):
            for num in range(0, limit // den + 1):
                if math.gcd(num, den) == 1 or num == 0:
                    vals.add(Fraction(num, den))
                    vals.add(Fraction(-num, den))
    else:
        raise ValueError(f"unknown domain {domain!r}")
    vals = {v for v in vals if bitsize(v) <= bits}
    return sorted(vals, key=lambda v: (bitsize(v), abs(v.numerator) + v.denominator, abs(v), v < 0))


def is_nontrivial(loop: Loop) -> bool:
    """True iff the orbit is infinite."""
    if all(a == 0 for a in loop.init):
        return False
    jd = jordan_decomposition(loop)
    cd = convenient_u(jd)
    for b, k in zip(jd.blocks, cd.k):
        if b.is_zero or k == 0:
            continue
        if k >= 2 or is_root_of_unity(b.eigenvalue) is None:
            return True
    return False


def enumerate_bounded(bits: int, dim: int, domain: str = "integers",
                      limit: int = DEFAULT_CANDIDATE_LIMIT) -> Iterator[Loop]:
    """Every loop of dimension ``dim`` whose entries all have bitsize at most ``bits``."""
    vals = bounded_values(bits, domain)
    count = len(vals) ** (dim * dim + dim)
    if count > limit:
        raise ResourceLimitError(f"{count} candidate loops exceed the limit {limit}")
    for entries in product(vals, repeat=dim * dim + dim):
        M = [entries[i * dim:(i + 1) * dim] for i in range(dim)]
        yield Loop(M, entries[dim * dim:])


@dataclass
class SynthSpec:
    S: list[MultiPoly]
    bits: int
    dim: int
    domain: str = "integers"
    mode: str = "weak"  # or "strong"
    strategy: str = "template"  # template first, then exhaustive; "exhaustive" skips templates
    lattice_cap: int = DEFAULT_CAP
    candidate_limit: int = DEFAULT_CANDIDATE_LIMIT

    def __post_init__(self):
        if self.bits < 0 or self.dim < 1:
            raise ValueError("need bits >= 0 and dim >= 1")
        if self.mode not in ("weak", "strong"):
            raise ValueError("mode must be weak or strong")


@dataclass
class SynthResult:
    found: bool
    loop: Loop | None = None
    certificate: VerifyVerdict | None = None
    candidates: int = 0
    note: str = "answers the bit-bounded question only"


def _points_on_variety(S: Sequence[MultiPoly], vals: Sequence[Fraction], dim: int) -> Iterator[tuple]:
    for alpha in product(vals, repeat=dim):
        if all(p.evaluate(list(alpha)) == 0 for p in S):
            yield alpha


def _check(spec: SynthSpec, loop: Loop) -> VerifyVerdict | None:
    # cheap orbit sampling before the symbolic checks
    for pt in loop.orbit(4)[1:]:
        if any(p.evaluate(list(pt)) != 0 for p in spec.S):
            return None
    if not is_nontrivial(loop):
        return None
    cr = closure(loop, lattice_cap=spec.lattice_cap)
    if spec.mode == "weak":
        v = verify_invariant(spec.S, loop, cr)
    else:
        v = verify_strongest(spec.S, loop, cr)
    return v if v.answer else None


def _templates(vals: Sequence[Fraction], dim: int) -> Iterator[list[list[Fraction]]]:
    for c in vals:
        yield [[c if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]


def synthesize(spec: SynthSpec) -> SynthResult:
    """Search for a non-trivial B-bounded loop whose orbit closure lies in (weak) or equals (strong) V(S)."""
    vals = bounded_values(spec.bits, spec.domain)
    S = [p.to_rational() for p in spec.S]
    spec = SynthSpec(S, spec.bits, spec.dim, spec.domain, spec.mode, spec.strategy, spec.lattice_cap,
                     spec.candidate_limit)
    alphas = list(_points_on_variety(S, vals, spec.dim))
    examined = 0
    if not alphas:
        return SynthResult(False, candidates=0)
    if spec.strategy == "template":
        for M in _templates(vals, spec.dim):
            for alpha in alphas:
                examined += 1
                v = _check(spec, Loop(M, alpha))
                if v is not None:
                    return SynthResult(True, Loop(M, alpha), v, examined)
    total = len(vals) ** (spec.dim * spec.dim) * len(alphas)
    if total > spec.candidate_limit:
        raise ResourceLimitError(f"{total} candidate loops exceed the limit {spec.candidate_limit}")
    for entries in product(vals, repeat=spec.dim * spec.dim):
        M = [entries[i * spec.dim:(i + 1) * spec.dim] for i in range(spec.dim)]
        for alpha in alphas:
            examined += 1
            v = _check(spec, Loop(M, alpha))
            if v is not None:
                return SynthResult(True, Loop(M, alpha), v, examined)
    return SynthResult(False, candidates=examined)
