"""Multiplicative relations among algebraic numbers and their canonical binomials.

The lattice ``{v in Z^s : prod(lam_i ** v_i) == 1}`` is searched by a
meet-in-the-middle enumeration over a box of exponent vectors.  Both halves
are hashed by their images in two prime fields; every match is then checked
exactly in the number field before it is added to the basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

from flint import fmpz_mat, nmod_poly
from gmpy2 import next_prime

from .groebner import ResourceLimitError, eliminate
from .numbers import AlgebraicNumber, coeff_list, is_root_of_unity
from .poly import MultiPoly

DEFAULT_CAP = 16
DEFAULT_SEARCH_LIMIT = 2_000_000


def hermite_normal_form(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style HNF (upper triangular, positive pivots, reduced above pivots), zero rows dropped."""
    vectors = [list(map(int, v)) for v in vectors]
    if not vectors or not vectors[0]:
        return []
    H = fmpz_mat(vectors).hnf()
    rows = [tuple(int(x) for x in r) for r in H.tolist()]
    return [r for r in rows if any(r)]


def in_lattice(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> bool:
    """Membership by back-substitution against an HNF basis."""
    v = list(v)
    for row in hnf:
        p = next(i for i, x in enumerate(row) if x)
        if v[p] % row[p]:
            return False
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


@dataclass
class LatticeBasis:
    vectors: list[tuple[int, ...]]
    dimension: int
    completeness: str = "complete"  # or "bounded"
    cap: int = DEFAULT_CAP
    bound: float | None = None

    @property
    def is_complete(self) -> bool:
        return self.completeness == "complete"

    def contains(self, v: Sequence[int]) -> bool:
        return in_lattice(v, self.vectors)

    def diagonal_product(self) -> int:
        return math.prod(next(x for x in r if x) for r in self.vectors)


@dataclass
class EigenTuple:
    values: list[AlgebraicNumber]
    unit_orders: list[int | None] = dc_field(default_factory=list)

    def __post_init__(self):
        if any(v.is_zero() for v in self.values):
            raise ValueError("exponent lattice values must be nonzero")
        if not self.unit_orders:
            self.unit_orders = [is_root_of_unity(v) for v in self.values]


def height(a: AlgebraicNumber) -> int:
    """Largest absolute coefficient of the primitive integer minimal polynomial."""
    coeffs = coeff_list(a.minpoly())
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = math.gcd(*ints)
    return max(abs(x) // g for x in ints)


def masser_bound(values: Sequence[AlgebraicNumber]) -> float:
    """``(D * log2(H + 2)) ** (s^2 + s)``, a concrete stand-in for Masser's search bound."""
    s = len(values)
    D = max(v.degree for v in values)
    H = max(height(v) for v in values)
    base = D * math.log2(H + 2)
    try:
        return float(base ** (s * s + s))
    except OverflowError:
        return math.inf


# --------------------------------------------------------------------------- modular images


class _ModularImage:
    """Ring homomorphism from the field's order (away from bad primes) to F_p."""

    def __init__(self, values: Sequence[AlgebraicNumber], start: int):
        K = values[0].field
        p = start
        while True:
            p = int(next_prime(p))
            image = self._try(K, values, p)
            if image is not None:
                self.p, self.values = p, image
                return

    @staticmethod
    def _try(K, values, p):
        mcoeffs = coeff_list(K.minpoly)
        if any(c.denominator % p == 0 for c in mcoeffs):
            return None
        roots = nmod_poly([int(c.numerator * pow(c.denominator, -1, p)) % p for c in mcoeffs], p).roots()
        if not roots:
            return None
        r = int(roots[0][0])
        out = []
        for v in values:
            acc = 0
            for c in reversed(v.coords):
                if c.denominator % p == 0:
                    return None
                acc = (acc * r + c.numerator * pow(c.denominator, -1, p)) % p
            if acc == 0:
                return None
            out.append(acc)
        return out


def _side_keys(images: list[_ModularImage], idx: Sequence[int], ranges: Sequence[range], sign: int):
    """Map modular fingerprint -> exponent vectors for one half of the coordinates."""
    tables = []
    for img in images:
        p = img.p
        per = []
        for i, rg in zip(idx, ranges):
            lam = img.values[i] if sign > 0 else pow(img.values[i], -1, p)
            per.append({e: pow(lam, e, p) for e in rg})
        tables.append((p, per))
    out: dict = {}
    for vec in product(*ranges):
        key = []
        for p, per in tables:
            acc = 1
            for t, e in zip(per, vec):
                acc = acc * t[e] % p
            key.append(acc)
        out.setdefault(tuple(key), []).append(vec)
    return out


def _exact_relation(values: Sequence[AlgebraicNumber], v: Sequence[int]) -> bool:
    K = values[0].field
    num, den = K.one, K.one
    for lam, e in zip(values, v):
        if e > 0:
            num = num * lam**e
        elif e < 0:
            den = den * lam ** (-e)
    return num == den


def _distinct(values: Sequence[AlgebraicNumber]) -> tuple[list[int], list[int]]:
    reps: list[int] = []
    group: list[int] = []
    for i, v in enumerate(values):
        for gi, r in enumerate(reps):
            if values[r] == v:
                group.append(gi)
                break
        else:
            group.append(len(reps))
            reps.append(i)
    return reps, group


def exponent_lattice(t: EigenTuple | Sequence[AlgebraicNumber], cap: int = DEFAULT_CAP,
                     search_limit: int = DEFAULT_SEARCH_LIMIT) -> LatticeBasis:
    """HNF basis of all relations with max-norm at most ``cap`` (plus root-of-unity orders)."""
    if not isinstance(t, EigenTuple):
        t = EigenTuple(list(t))
    if cap < 1:
        raise ValueError("cap must be at least 1")
    values = t.values
    s = len(values)
    if s == 0:
        return LatticeBasis([], 0, "complete", cap)
    reps, group = _distinct(values)
    base: list[tuple[int, ...]] = []
    for i, g in enumerate(group):
        if reps[g] != i:
            e = [0] * s
            e[i], e[reps[g]] = 1, -1
            base.append(tuple(e))
    sub = [values[r] for r in reps]
    orders = [t.unit_orders[r] for r in reps]
    inner, completeness, bound = _lattice_distinct(sub, orders, cap, search_limit)
    for v in inner:
        e = [0] * s
        for k, r in enumerate(reps):
            e[r] = v[k]
        base.append(tuple(e))
    return LatticeBasis(hermite_normal_form(base) if base else [], s, completeness, cap, bound)


def _lattice_distinct(values, orders, cap, search_limit):
    s = len(values)
    basis: list[tuple[int, ...]] = []
    for i, o in enumerate(orders):
        if o is not None:
            e = [0] * s
            e[i] = o
            basis.append(tuple(e))
    hnf = hermite_normal_form(basis) if basis else []
    free = sum(o is None for o in orders)
    if free <= 1:
        # a relation involving one non-root of unity would make it a root of unity
        completeness, bound = "complete", None
    else:
        bound = masser_bound([v for v, o in zip(values, orders) if o is None])
        completeness = "complete" if cap >= bound else "bounded"
    ranges = [range(o) if o is not None else range(-cap, cap + 1) for o in orders]
    left = list(range((s + 1) // 2))
    right = list(range((s + 1) // 2, s))
    size = max(math.prod(len(ranges[i]) for i in left), math.prod(len(ranges[i]) for i in right) or 1)
    if size > search_limit:
        raise ResourceLimitError(
            f"exponent search needs {size} products per side (limit {search_limit})",
            partial=LatticeBasis(hnf, s, "bounded", cap, bound))
    images = [_ModularImage(values, 2**61), _ModularImage(values, 2**61 + 2**40)]
    lkeys = _side_keys(images, left, [ranges[i] for i in left], 1)
    rkeys = _side_keys(images, right, [ranges[i] for i in right], -1) if right else {(1,) * len(images): [()]}
    candidates = []
    for key, rvecs in rkeys.items():
        for lv in lkeys.get(key, ()):
            for rv in rvecs:
                v = lv + rv
                if any(v):
                    candidates.append(v)
    candidates.sort(key=lambda v: (max(map(abs, v)), sum(map(abs, v)), v))
    for v in candidates:
        if in_lattice(v, hnf):
            continue
        if not _exact_relation(values, v):
            continue
        basis.append(v)
        hnf = hermite_normal_form(hnf + [v])
    for v in hnf:
        assert _exact_relation(values, v), "emitted relation failed exact verification"
    return hnf, completeness, bound


def canonical_binomials(basis: LatticeBasis | Sequence[Sequence[int]], variables: Sequence[str]) -> list[MultiPoly]:
    """``y^{v+} - y^{v-}`` for every basis vector ``v``."""
    vectors = basis.vectors if isinstance(basis, LatticeBasis) else basis
    out = []
    for v in vectors:
        if len(v) != len(variables):
            raise ValueError("vector length does not match the number of variables")
        plus = tuple(max(x, 0) for x in v)
        minus = tuple(a - x for a, x in zip(plus, v))
        out.append(MultiPoly(variables, {plus: 1}) - MultiPoly(variables, {minus: 1}))
    return out


def lattice_ideal(basis: LatticeBasis | Sequence[Sequence[int]], variables: Sequence[str]) -> list[MultiPoly]:
    """Generators of the lattice ideal: the basis binomials saturated by the product of variables.

    The binomials of a basis alone can vanish on extra components inside
    coordinate hyperplanes; saturation removes exactly those.
    """
    binomials = canonical_binomials(basis, variables)
    if not binomials:
        return []
    name = "_s"
    while name in variables:
        name += "_"
    ext = (name,) + tuple(variables)
    prod_all = MultiPoly.monomial(ext, (0,) + (1,) * len(variables))
    s = MultiPoly.var(ext, name)
    gens = [b.rename(ext) for b in binomials] + [1 - s * prod_all]
    return [g.normalized() for g in eliminate(gens, 1)]
