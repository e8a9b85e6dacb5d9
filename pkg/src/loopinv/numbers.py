"""Exact arithmetic over the rationals, Q[x], number fields and algebraic numbers.

A number field is ``Q(theta)`` given by the monic minimal polynomial of
``theta`` together with a certified complex enclosure that fixes which root
``theta`` is.  Field elements are polynomials in ``theta`` of degree below the
field degree, stored as flint ``fmpq_poly`` values.

Splitting fields are built by repeatedly adjoining a root of an irreducible
factor, using Trager's norm method to factor over the current field.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import count, product
from typing import Iterable, Sequence

import flint
from flint import acb, arb, fmpq, fmpq_mat, fmpq_poly

UniPoly = fmpq_poly
Rational = Fraction

DEFAULT_PREC = 192


class DomainError(ValueError):
    """Raised for mathematically undefined requests (zero inverse, zero polynomial...)."""


# --------------------------------------------------------------------------- rationals


def fraction(x) -> Fraction:
    """Convert an int, Fraction, str or flint fmpq to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, AlgebraicNumber):
        return x.to_fraction()
    raise TypeError(f"cannot convert {x!r} to a rational")


def to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    f = fraction(x)
    return fmpq(f.numerator, f.denominator)


def upoly(coeffs: Iterable) -> fmpq_poly:
    """Univariate polynomial from coefficients, lowest degree first."""
    return fmpq_poly([to_fmpq(c) for c in coeffs])


def coeff_list(p: fmpq_poly) -> list[Fraction]:
    return [fraction(c) for c in p.coeffs()]


def monic(p: fmpq_poly) -> fmpq_poly:
    return p / p.leading_coefficient()


def _poly_key(p: fmpq_poly) -> tuple:
    return (p.degree(), tuple(coeff_list(p)))


def factor_rational_poly(p: fmpq_poly) -> list[tuple[fmpq_poly, int]]:
    """Factor ``p`` over Q into monic irreducibles with multiplicities."""
    if p.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    _, factors = p.factor()
    out = [(monic(f), int(e)) for f, e in factors]
    out.sort(key=lambda fe: _poly_key(fe[0]))
    return out


def squarefree_part(p: fmpq_poly) -> fmpq_poly:
    g = p.gcd(p.derivative())
    return monic(p / g if g.degree() > 0 else p)


def _interpolate(xs: Sequence[int], ys: Sequence[fmpq]) -> fmpq_poly:
    """Newton interpolation through the points (xs[i], ys[i])."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    result = fmpq_poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        result = result * fmpq_poly([-xs[i], 1]) + coef[i]
    return result


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


# --------------------------------------------------------------------------- numerics


@contextmanager
def working_precision(bits: int):
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = old


def _arb_fraction(x: arb) -> Fraction:
    man, exp = x.mid().man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _arb_radius(x: arb) -> Fraction:
    return _arb_fraction(x.rad()) * Fraction(101, 100) + Fraction(1, 2**400)


@dataclass(frozen=True)
class IsolatingBox:
    """Disc ``|z - (re + i*im)| <= radius`` containing exactly one root."""

    re: Fraction
    im: Fraction
    radius: Fraction

    @classmethod
    def from_acb(cls, z: acb) -> "IsolatingBox":
        return cls(_arb_fraction(z.real), _arb_fraction(z.imag),
                   _arb_radius(z.real) + _arb_radius(z.imag))

    def contains_box(self, other: "IsolatingBox") -> bool:
        gap = self.radius - other.radius
        if gap < 0:
            return False
        return (self.re - other.re) ** 2 + (self.im - other.im) ** 2 <= gap * gap

    def sort_key(self) -> tuple[int, int]:
        scale = 10**20
        return (round(self.re * scale), round(self.im * scale))

    def as_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


def isolate_roots(p: fmpq_poly, prec: int = DEFAULT_PREC) -> list[acb]:
    """Certified enclosures of the roots of a squarefree polynomial, in a fixed order."""
    with working_precision(prec):
        roots = [r for r, _ in p.complex_roots()]
    roots.sort(key=lambda r: IsolatingBox.from_acb(r).sort_key())
    return roots


def _horner_acb(p: fmpq_poly, z: acb) -> acb:
    acc = acb(0)
    for c in reversed(p.coeffs()):
        acc = acc * z + acb(c)
    return acc


# --------------------------------------------------------------------------- number fields


class NumberField:
    """``Q(theta)`` with ``theta`` a chosen complex root of ``minpoly``."""

    def __init__(self, minpoly: fmpq_poly, theta: acb | None = None):
        minpoly = monic(minpoly)
        self.minpoly = minpoly
        self.degree = minpoly.degree()
        if self.degree < 1:
            raise DomainError("minimal polynomial must have positive degree")
        if theta is None:
            theta = isolate_roots(minpoly)[0]
        self._theta = {DEFAULT_PREC: theta}

    # numerics -----------------------------------------------------------
    def theta_at(self, prec: int = DEFAULT_PREC) -> acb:
        """Enclosure of ``theta`` refined to ``prec`` bits."""
        if prec in self._theta:
            return self._theta[prec]
        coarse = self._theta[max(self._theta)]
        with working_precision(prec):
            candidates = [r for r in isolate_roots(self.minpoly, prec) if r.overlaps(coarse)]
        if len(candidates) != 1:
            raise ArithmeticError("lost track of the primitive element while refining")
        self._theta[prec] = candidates[0]
        return candidates[0]

    @property
    def box(self) -> IsolatingBox:
        return IsolatingBox.from_acb(self.theta_at())

    def refine_box(self, prec: int) -> IsolatingBox:
        return IsolatingBox.from_acb(self.theta_at(prec))

    # elements -----------------------------------------------------------
    def __call__(self, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            if x.field is self:
                return x
            if x.field.degree == 1:
                return AlgebraicNumber(self, fmpq_poly([to_fmpq(x.to_fraction())]))
            raise DomainError("element belongs to a different number field")
        if isinstance(x, fmpq_poly):
            return AlgebraicNumber(self, x % self.minpoly if x.degree() >= self.degree else x)
        if isinstance(x, (list, tuple)):
            return self(upoly(x))
        return AlgebraicNumber(self, fmpq_poly([to_fmpq(x)]))

    @property
    def zero(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, fmpq_poly([]))

    @property
    def one(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, fmpq_poly([1]))

    @property
    def gen(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return self(-self.minpoly.coeffs()[0])
        return AlgebraicNumber(self, fmpq_poly([0, 1]))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def root_near(self, p: fmpq_poly, approx: complex) -> "AlgebraicNumber":
        """The root of ``p`` lying in this field that is closest to ``approx``."""
        roots = roots_in_field(p, self)
        if not roots:
            raise DomainError("polynomial has no root in this field")
        return min(roots, key=lambda r: abs(r.approx_complex() - approx))

    def __repr__(self) -> str:
        return f"NumberField({self.minpoly.str(var='t')}, t≈{self.box.as_complex():.6g})"


RATIONALS = NumberField(fmpq_poly([0, 1]), acb(0))


class AlgebraicNumber:
    """Element of a :class:`NumberField` in the power basis of its primitive element."""

    __slots__ = ("field", "rep", "_minpoly")

    def __init__(self, field: NumberField, rep: fmpq_poly):
        self.field = field
        self.rep = rep
        self._minpoly = None

    # coercion -----------------------------------------------------------
    def _other(self, other) -> fmpq_poly | None:
        if isinstance(other, AlgebraicNumber):
            if other.field is self.field:
                return other.rep
            if other.field.degree == 1:
                return fmpq_poly([to_fmpq(other.to_fraction())])
            if self.field.degree == 1:
                return None
            raise DomainError("operands live in different number fields; embed them first")
        if isinstance(other, (int, Fraction, fmpq)):
            return fmpq_poly([to_fmpq(other)])
        return None

    def _new(self, rep: fmpq_poly) -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, rep)

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, AlgebraicNumber) else other + self
        return self._new(self.rep + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, AlgebraicNumber) else -(other - self)
        return self._new(self.rep - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._new(o - self.rep)

    def __neg__(self):
        return self._new(-self.rep)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented if not isinstance(other, AlgebraicNumber) else other * self
        prod = self.rep * o
        if prod.degree() >= self.field.degree:
            prod = prod % self.field.minpoly
        return self._new(prod)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.rep.is_zero():
            raise DomainError("inverse of zero")
        if self.rep.degree() == 0:
            return self._new(fmpq_poly([1 / self.rep.coeffs()[0]]))
        D = self.field.degree
        rhs = fmpq_mat(D, 1, [1] + [0] * (D - 1))
        sol = self.multiplication_matrix().solve(rhs)
        return self._new(fmpq_poly([sol[i, 0] for i in range(D)]))

    def __truediv__(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and self.field.degree == 1:
                return other.inverse() * self
            return self * self.field(other).inverse() if other.field.degree == 1 else self * other.inverse()
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DomainError("division by zero")
        return self._new(self.rep / o.coeffs()[0])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicNumber) and other.field is not self.field:
            if self.field.degree > 1 and other.field.degree > 1:
                return algebraic_equal(self, other)
        try:
            o = self._other(other)
        except DomainError:
            return algebraic_equal(self, other)
        if o is None:
            if isinstance(other, AlgebraicNumber):
                return other == self
            return NotImplemented
        return self.rep == o

    def __hash__(self) -> int:
        if self.rep.degree() <= 0:
            return hash(self.to_fraction())
        return hash(tuple(coeff_list(self.rep)))

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def is_rational(self) -> bool:
        return self.rep.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return fraction(self.rep.coeffs()[0]) if not self.rep.is_zero() else Fraction(0)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        c = coeff_list(self.rep)
        return tuple(c + [Fraction(0)] * (self.field.degree - len(c)))

    # numerics -----------------------------------------------------------
    def approx(self, prec: int = DEFAULT_PREC) -> acb:
        with working_precision(prec):
            return _horner_acb(self.rep, self.field.theta_at(prec))

    def approx_complex(self) -> complex:
        z = self.approx()
        return complex(float(_arb_fraction(z.real)), float(_arb_fraction(z.imag)))

    # algebraic data -----------------------------------------------------
    def minpoly(self) -> fmpq_poly:
        """Minimal polynomial over Q (monic)."""
        if self._minpoly is None:
            if self.is_rational():
                self._minpoly = fmpq_poly([-to_fmpq(self.to_fraction()), 1])
            else:
                self._minpoly = squarefree_part(self.charpoly())
        return self._minpoly

    def multiplication_matrix(self) -> fmpq_mat:
        """Matrix of ``x -> self*x`` on the power basis (columns are images)."""
        D = self.field.degree
        cols = []
        c = self.rep
        shift = fmpq_poly([0, 1])
        for _ in range(D):
            cc = list(c.coeffs()) + [fmpq(0)] * (D - len(c.coeffs()))
            cols.append(cc)
            c = (c * shift) % self.field.minpoly
        return fmpq_mat(D, D, [cols[j][i] for i in range(D) for j in range(D)])

    def charpoly(self) -> fmpq_poly:
        return self.multiplication_matrix().charpoly()

    def norm(self) -> Fraction:
        return fraction(self.field.minpoly.resultant(self.rep)) if not self.is_rational() \
            else self.to_fraction() ** self.field.degree

    @property
    def degree(self) -> int:
        return self.minpoly().degree()

    def isolating_box(self, prec: int = DEFAULT_PREC) -> IsolatingBox:
        """Disc isolating this number among the roots of its minimal polynomial."""
        if self.is_rational():
            q = self.to_fraction()
            return IsolatingBox(q, Fraction(0), Fraction(0))
        z = self.approx(prec)
        hits = [r for r in isolate_roots(self.minpoly(), prec) if r.overlaps(z)]
        if len(hits) != 1:
            return self.isolating_box(prec * 2)
        return IsolatingBox.from_acb(hits[0])

    def sort_key(self) -> tuple:
        return (tuple(coeff_list(self.minpoly())), self.isolating_box().sort_key())

    def to_str(self, var: str = "t") -> str:
        return self.rep.str(var=var) if not self.rep.is_zero() else "0"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        return self.to_str()

    def __repr__(self) -> str:
        if self.is_rational():
            return f"AlgebraicNumber({self.to_fraction()})"
        return f"AlgebraicNumber({self.to_str()} ≈ {self.approx_complex():.6g})"


# --------------------------------------------------------------------------- polynomials over K
# A K-polynomial is a list of AlgebraicNumber, lowest degree first, trimmed.


def _ktrim(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _kdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    inv_lead = b[-1].inverse()
    q = [b[0].field.zero] * max(len(a) - len(b) + 1, 0)
    while len(_ktrim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - c * bc
        a.pop()
    return q, a


def _kmonic(p: list) -> list:
    inv = p[-1].inverse()
    return [c * inv for c in p]


def _kgcd(a: list, b: list) -> list:
    a, b = _ktrim(list(a)), _ktrim(list(b))
    while b:
        _, r = _kdivmod(a, b)
        a, b = b, _ktrim(r)
    return _kmonic(a)


def _kcompose_linear(p: fmpq_poly, K: NumberField, a, b) -> list:
    """Coefficients in K of ``p(a + b*x)`` for a, b in K."""
    result = [K.zero]
    lin = [K(a), K(b)]
    for c in reversed(p.coeffs()):
        prod = [K.zero] * (len(result) + 1)
        for i, rc in enumerate(result):
            prod[i] = prod[i] + rc * lin[0]
            prod[i + 1] = prod[i + 1] + rc * lin[1]
        prod[0] = prod[0] + K(c)
        result = _ktrim(prod) or [K.zero]
    return _ktrim(result)


# --------------------------------------------------------------------------- Trager factorisation


@dataclass
class _KFactor:
    coeffs: list  # monic, lowest first, in K
    norm: fmpq_poly  # irreducible over Q, a root is rho + shift*theta
    shift: int


def _norm(f: fmpq_poly, K: NumberField, shift: int) -> fmpq_poly:
    """``Res_t(m_K(t), f(x - shift*t))`` via evaluation and interpolation."""
    n = f.degree() * K.degree
    xs = list(range(n + 1))
    ys = [K.minpoly.resultant(f(fmpq_poly([x0, -shift]))) for x0 in xs]
    return _interpolate(xs, ys)


def _shifts():
    yield 0
    for k in count(1):
        yield k
        yield -k


def factor_over(f: fmpq_poly, K: NumberField) -> list[_KFactor]:
    """Factor an irreducible ``f`` in Q[x] over K (monic factors, deterministic order)."""
    f = monic(f)
    if K.degree == 1:
        return [_KFactor([K(c) for c in f.coeffs()], f, 0)]
    for s in _shifts():
        N = _norm(f, K, s)
        if N.gcd(N.derivative()).degree() == 0:
            break
    out = []
    theta = K.gen
    for Nj, _ in factor_rational_poly(N):
        shifted = _kcompose_linear(Nj, K, s * theta, 1)
        g = _kgcd([K(c) for c in f.coeffs()], shifted)
        out.append(_KFactor(g, Nj, s))
    out.sort(key=lambda fac: (len(fac.coeffs), _poly_key(fac.norm)))
    return out


def roots_in_field(f: fmpq_poly, K: NumberField) -> list[AlgebraicNumber]:
    """All roots of ``f`` (any rational polynomial) that lie in K."""
    roots = []
    for g, _ in factor_rational_poly(f):
        for fac in factor_over(g, K):
            if len(fac.coeffs) == 2:
                roots.append(-fac.coeffs[0])
    roots.sort(key=lambda r: r.isolating_box().sort_key())
    return roots


class Embedding:
    """Field homomorphism ``source -> target`` fixed by the image of ``theta``."""

    def __init__(self, source: NumberField, target: NumberField, theta_image: AlgebraicNumber):
        self.source, self.target, self.theta_image = source, target, theta_image

    @classmethod
    def identity(cls, K: NumberField) -> "Embedding":
        return cls(K, K, K.gen)

    def __call__(self, a):
        if not isinstance(a, AlgebraicNumber):
            return self.target(a)
        if a.field is self.target:
            return a
        if a.field.degree == 1:
            return self.target(a.to_fraction())
        if a.field is not self.source:
            raise DomainError("element is not in the embedding's source field")
        acc = self.target.zero
        for c in reversed(a.rep.coeffs()):
            acc = acc * self.theta_image + c
        return acc

    def then(self, other: "Embedding") -> "Embedding":
        return Embedding(self.source, other.target, other(self.theta_image))


def _adjoin(K: NumberField, f: fmpq_poly, fac: _KFactor, target: acb | None = None,
            prec: int = DEFAULT_PREC) -> tuple[NumberField, Embedding, AlgebraicNumber]:
    """Adjoin a root of the K-irreducible factor ``fac`` of ``f``."""
    N, s = fac.norm, fac.shift
    candidates = isolate_roots(N, prec)
    L = NumberField(N, candidates[0])
    xi = L.gen
    # theta_K is the unique common root of m_K(t) and f(xi - s*t) in L
    h = _kcompose_linear(f, L, xi, -s)
    g = _kgcd([L(c) for c in K.minpoly.coeffs()], h)
    if len(g) != 2:
        raise ArithmeticError("primitive element construction failed")
    theta_rep = (-g[0]).rep
    theta_K = K.theta_at(prec)
    chosen = None
    with working_precision(prec):
        for r in candidates:
            if not _horner_acb(theta_rep, r).overlaps(theta_K):
                continue
            if target is not None and not (r - s * theta_K).overlaps(target):
                continue
            chosen = r
            break
    if chosen is None:
        if prec > 4096:
            raise ArithmeticError("could not match embeddings while adjoining a root")
        return _adjoin(K, f, fac, target, prec * 2)
    L = NumberField(N, chosen)
    theta_img = L(theta_rep)
    emb = Embedding(K, L, theta_img)
    return L, emb, L.gen - s * theta_img


@dataclass
class SplittingField:
    """A splitting field with the roots of every input factor.

    ``tower`` lists the adjoined roots ``(factor, root, relative degree)`` in
    order; products of their powers below the relative degrees form a basis
    of the field over Q, which :meth:`tower_coordinates` uses.
    """

    field: NumberField
    roots: dict = dc_field(default_factory=dict)
    factors: list = dc_field(default_factory=list)
    embedding: Embedding | None = None
    tower: list = dc_field(default_factory=list)
    _basis_inv: fmpq_mat | None = None

    def roots_of(self, f: fmpq_poly) -> list[AlgebraicNumber]:
        return self.roots[monic(f).str()]

    def tower_exponents(self) -> list[tuple[int, ...]]:
        ranges = [range(e) for _, _, e in self.tower]
        return [tuple(t) for t in product(*ranges)] if ranges else [()]

    def tower_coordinates(self, a: AlgebraicNumber) -> dict[tuple[int, ...], Fraction]:
        """Write ``a`` as a rational combination of monomials in the adjoined roots."""
        K = self.field
        a = K(a)
        if a.is_rational():
            q = a.to_fraction()
            return {(0,) * len(self.tower): q} if q else {}
        exps = self.tower_exponents()
        if self._basis_inv is None:
            D = K.degree
            cols = []
            for e in exps:
                m = K.one
                for (_, r, _), k in zip(self.tower, e):
                    m = m * r**k
                cols.append(m.coords)
            self._basis_inv = fmpq_mat(D, D, [to_fmpq(cols[j][i]) for i in range(D) for j in range(D)]).inv()
        D = K.degree
        vec = self._basis_inv * fmpq_mat(D, 1, [to_fmpq(c) for c in a.coords])
        out = {}
        for i, e in enumerate(exps):
            c = vec[i, 0]
            if c != 0:
                out[e] = fraction(c)
        return out


def splitting_field(polys: Iterable[fmpq_poly], base: NumberField | None = None) -> SplittingField:
    """Smallest extension of ``base`` (default Q) containing every root of ``polys``."""
    K = base or RATIONALS
    emb = Embedding.identity(K)
    factors: list[fmpq_poly] = []
    for p in polys:
        for f, _ in factor_rational_poly(p):
            if all(f != g for g in factors):
                factors.append(f)
    factors.sort(key=_poly_key)
    found: dict[str, list] = {}
    tower: list = []
    for f in factors:
        while True:
            facs = factor_over(f, K)
            nonlinear = [fac for fac in facs if len(fac.coeffs) > 2]
            if not nonlinear:
                break
            K, step, rho = _adjoin(K, f, nonlinear[0])
            emb = emb.then(step)
            found = {k: [step(r) for r in v] for k, v in found.items()}
            tower = [(g, step(r), e) for g, r, e in tower]
            tower.append((f, rho, len(nonlinear[0].coeffs) - 1))
        found[f.str()] = [-fac.coeffs[0] for fac in facs]
    for k in found:
        found[k].sort(key=lambda r: r.isolating_box().sort_key())
    return SplittingField(K, found, factors, emb, tower)


def common_field(K1: NumberField, K2: NumberField) -> tuple[NumberField, Embedding, Embedding]:
    """A field containing both, with embeddings respecting the chosen complex roots."""
    if K1 is K2:
        ident = Embedding.identity(K1)
        return K1, ident, ident
    if K2.degree == 1:
        return K1, Embedding.identity(K1), Embedding(K2, K1, K1(K2.gen.to_fraction()))
    if K1.degree == 1:
        L, e2, e1 = common_field(K2, K1)
        return L, e1, e2
    target = K2.theta_at()
    m2 = K2.minpoly
    prec = DEFAULT_PREC
    for fac in factor_over(m2, K1):
        if len(fac.coeffs) == 2:
            root = -fac.coeffs[0]
            if root.approx().overlaps(target):
                return K1, Embedding.identity(K1), Embedding(K2, K1, root)
            continue
        with working_precision(prec):
            vals = acb(0)
            for c in reversed(fac.coeffs):
                vals = vals * target + c.approx(prec)
        if not vals.contains(acb(0)):
            continue
        L, e1, rho = _adjoin(K1, m2, fac, target)
        return L, e1, Embedding(K2, L, rho)
    raise ArithmeticError("no factor of the minimal polynomial matches the embedding")


def algebraic_equal(a: AlgebraicNumber, b) -> bool:
    if not isinstance(b, AlgebraicNumber):
        return a == a.field(b)
    _, ea, eb = common_field(a.field, b.field)
    return ea(a).rep == eb(b).rep


# --------------------------------------------------------------------------- conjugates, roots of unity


@dataclass
class ConjugateSet:
    element: AlgebraicNumber
    conjugates: list[AlgebraicNumber]

    def __len__(self) -> int:
        return len(self.conjugates)


def conjugates(a: AlgebraicNumber) -> ConjugateSet:
    """All roots of the minimal polynomial of ``a``, in a field that also contains ``a``."""
    m = a.minpoly()
    sf = splitting_field([m], base=a.field)
    return ConjugateSet(sf.embedding(a), sf.roots_of(m))


def is_root_of_unity(a: AlgebraicNumber) -> int | None:
    """Least ``n >= 1`` with ``a**n == 1``, or None."""
    if a.is_zero():
        raise DomainError("zero is not a root of unity")
    m = a.minpoly()
    D = m.degree()
    if any(fraction(c).denominator != 1 for c in m.coeffs()) or abs(fraction(m.coeffs()[0])) != 1:
        return None
    power = a.field.one
    for n in range(1, 2 * D * D + 3):
        power = power * a
        if totient(n) <= D and power == 1:
            return n
    return None
