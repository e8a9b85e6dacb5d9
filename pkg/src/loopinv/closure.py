"""Zariski closure of the orbit of a simple linear loop.

The orbit splits into finitely many isolated points ``M^i alpha`` (``i < n0``)
and the tail ``{M^n alpha : n >= n0}``.  In the coordinates ``z = A x`` with
``A = R U P^-1`` the tail becomes ``R J~^n beta``, whose closure is cut out
by a rational binomial ideal ``I_R`` generated by four families of
polynomials.  The closure of the tail is then ``{x : A x in V(I_R)}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .groebner import GroebnerBasis, buchberger, radical_membership
from .lattice import DEFAULT_CAP, DEFAULT_SEARCH_LIMIT, LatticeBasis, exponent_lattice, lattice_ideal
from .linalg import ConvenientData, JordanBlock, JordanData, Loop, Matrix, RData, build_r, convenient_u, \
    jordan_decomposition
from .numbers import AlgebraicNumber, NumberField, RATIONALS, coeff_list
from .poly import MultiPoly, x_vars


def z_vars(d: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, d + 1))


# --------------------------------------------------------------------------- generator families


@dataclass
class GeneratorSets:
    S1: list[MultiPoly]
    S2: dict[int, list[MultiPoly]]
    S3: dict[tuple[int, int], list[MultiPoly]]
    S4: list[MultiPoly]

    def all(self) -> list[MultiPoly]:
        out = list(self.S1)
        for v in self.S2.values():
            out.extend(v)
        for v in self.S3.values():
            out.extend(v)
        return out + list(self.S4)


def _zvar(block: JordanBlock, j: int, names: Sequence[str]) -> MultiPoly:
    """The block coordinate ``x_{i,j}`` (``j`` is 1-based)."""
    return MultiPoly.var(names, block.start + j - 1)


def build_s2(block: JordanBlock, k: int, names: Sequence[str]) -> list[MultiPoly]:
    """``x_{k-1}^j - x_{k-j} x_k^(j-1)`` for ``2 <= j <= k-1``."""
    if k < 3:
        return []
    xk1, xk = _zvar(block, k - 1, names), _zvar(block, k, names)
    return [xk1**j - _zvar(block, k - j, names) * xk ** (j - 1) for j in range(2, k)]


def build_s3(bi: JordanBlock, ki: int, bj: JordanBlock, kj: int, names: Sequence[str]) -> list[MultiPoly]:
    """``x_{i,ki-1} x_{j,kj} - x_{j,kj-1} x_{i,ki}`` when both indices are at least 2."""
    if ki < 2 or kj < 2:
        return []
    return [_zvar(bi, ki - 1, names) * _zvar(bj, kj, names) - _zvar(bj, kj - 1, names) * _zvar(bi, ki, names)]


def build_s4(blocks: Sequence[JordanBlock], ks: Sequence[int], names: Sequence[str]) -> list[MultiPoly]:
    """Coordinates that vanish along the tail: nilpotent blocks and entries past ``k_i``."""
    out = []
    for b, k in zip(blocks, ks):
        first = 1 if b.is_zero else k + 1
        out.extend(_zvar(b, j, names) for j in range(first, b.size + 1))
    return out


def build_s1(jd: JordanData, cd: ConvenientData, names: Sequence[str], cap: int = DEFAULT_CAP,
             search_limit: int = DEFAULT_SEARCH_LIMIT) -> tuple[list[MultiPoly], LatticeBasis, list[int]]:
    """Lattice ideal of the eigenvalues over the variables ``x_{i,k_i}`` with ``beta_i != 0``."""
    active = [i for i, (b, k) in enumerate(zip(jd.blocks, cd.k)) if not b.is_zero and k > 0]
    values = [jd.blocks[i].eigenvalue for i in active]
    lattice = exponent_lattice(values, cap, search_limit)
    sub_names = [names[jd.blocks[i].start + cd.k[i] - 1] for i in active]
    binomials = [b.rename(names) for b in lattice_ideal(lattice, sub_names)] if active else []
    return binomials, lattice, active


def generator_sets(jd: JordanData, cd: ConvenientData, cap: int = DEFAULT_CAP,
                   search_limit: int = DEFAULT_SEARCH_LIMIT) -> tuple[GeneratorSets, LatticeBasis, list[int]]:
    names = z_vars(jd.loop.dim)
    S1, lattice, active = build_s1(jd, cd, names, cap, search_limit)
    S2, S3 = {}, {}
    for i, (b, k) in enumerate(zip(jd.blocks, cd.k)):
        if not b.is_zero:
            S2[i] = build_s2(b, k, names)
    for i, (bi, ki) in enumerate(zip(jd.blocks, cd.k)):
        for j, (bj, kj) in enumerate(zip(jd.blocks, cd.k)):
            if i < j and not bi.is_zero and not bj.is_zero:
                S3[(i, j)] = build_s3(bi, ki, bj, kj, names)
    S4 = build_s4(jd.blocks, cd.k, names)
    return GeneratorSets(S1, S2, S3, S4), lattice, active


# --------------------------------------------------------------------------- result


@dataclass
class ClosureResult:
    """Isolated points plus the main component, kept as separate pieces."""

    loop: Loop
    isolated_points: list[tuple[Fraction, ...]]
    main_gens: list[MultiPoly]
    field: NumberField
    completeness: str = "complete"
    jordan: JordanData | None = None
    convenient: ConvenientData | None = None
    rdata: RData | None = None
    sets: GeneratorSets | None = None
    ideal_r: list[MultiPoly] = dc_field(default_factory=list)
    lattice: LatticeBasis | None = None
    A: Matrix | None = None
    Ainv: Matrix | None = None
    rational_gens: list[MultiPoly] | None = None
    y_eigenvalues: list[AlgebraicNumber] = dc_field(default_factory=list)
    _gb_r: GroebnerBasis | None = None

    @property
    def vars(self) -> tuple[str, ...]:
        return x_vars(self.loop.dim)

    @property
    def caveat(self) -> str | None:
        if self.completeness == "bounded":
            return "lattice cap bounded: valid over-approximation, possibly not strongest"
        return None

    def point_ideals(self) -> list[list[MultiPoly]]:
        xs = self.vars
        return [[MultiPoly.var(xs, i) - c for i, c in enumerate(pt)] for pt in self.isolated_points]

    def all_components(self) -> list[list[MultiPoly]]:
        return self.point_ideals() + [self.main_gens]

    # membership in the main component -----------------------------------
    def gb_r(self) -> GroebnerBasis:
        if self._gb_r is None:
            self._gb_r = buchberger(self.ideal_r)
        return self._gb_r

    def to_block(self, f: MultiPoly) -> MultiPoly:
        """``f(A^-1 z)``, i.e. ``f`` written in the block coordinates."""
        if self.Ainv is None:
            return f.rename(z_vars(self.loop.dim), list(range(self.loop.dim)))
        return f.substitute_linear(self.Ainv, z_vars(self.loop.dim))

    def vanishes_on_main(self, f: MultiPoly) -> bool:
        """``f`` (rational or with coefficients in the closure's field) vanishes on the main component."""
        if self.jordan is None:
            return radical_membership(f.to_rational() if f.is_rational() else f, self.main_gens)
        g = self.to_block(f)
        gb = self.gb_r()
        comps = g.components(self.field) if self.field.degree > 1 else [g.to_rational()]
        return all(radical_membership(c, self.ideal_r, gb) for c in comps)

    def vanishes_on_closure(self, f: MultiPoly) -> bool:
        if any(f.evaluate(list(pt)) != 0 for pt in self.isolated_points):
            return False
        return self.vanishes_on_main(f)


def _normalize_field_poly(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    if p.is_rational():
        return p.to_rational().normalized()
    lead = max(p.terms, key=lambda m: (sum(m), tuple(-e for e in reversed(m))))
    c = p.terms[lead]
    if isinstance(c, AlgebraicNumber):
        p = p * c.inverse()
    if p.is_rational():
        return p.to_rational().normalized()
    return p


def closure(loop: Loop, rationalize: bool = False, lattice_cap: int = DEFAULT_CAP,
            search_limit: int = DEFAULT_SEARCH_LIMIT) -> ClosureResult:
    """Strongest algebraic invariant of ``loop`` as isolated points plus a main ideal."""
    d = loop.dim
    xs = x_vars(d)
    if all(a == 0 for a in loop.init):
        gens = [MultiPoly.var(xs, i) for i in range(d)]
        res = ClosureResult(loop, [], gens, RATIONALS)
        if rationalize:
            res.rational_gens = list(gens)
        return res
    jd = jordan_decomposition(loop)
    cd = convenient_u(jd)
    rd = build_r(jd, cd)
    sets, lattice, _ = generator_sets(jd, cd, lattice_cap, search_limit)
    ideal_r = _dedupe(sets.all())
    K = jd.field
    A = rd.R @ cd.U @ jd.Pinv
    Ainv = jd.P @ cd.Uinv @ rd.Rinv
    main = _dedupe([_normalize_field_poly(g.substitute_linear(A, xs)) for g in ideal_r])
    main = [g for g in main if not g.is_zero()]
    res = ClosureResult(loop, loop.orbit(jd.isolated_count), main, K, lattice.completeness, jd, cd, rd,
                        sets, ideal_r, lattice, A, Ainv)
    if rationalize:
        rationalize_closure(res)
    return res


def _dedupe(polys: Sequence[MultiPoly]) -> list[MultiPoly]:
    out: list[MultiPoly] = []
    for p in polys:
        if not p.is_zero() and all(p != q for q in out):
            out.append(p)
    return out


# --------------------------------------------------------------------------- rationalization


class _Tau:
    """Rewrite field elements as rational polynomials in one variable per distinct eigenvalue."""

    def __init__(self, res: ClosureResult, names: Sequence[str]):
        jd = res.jordan
        sf = jd.splitting
        self.sf, self.names = sf, tuple(names)
        self.eigen: list[AlgebraicNumber] = []
        for b in jd.nonzero_blocks:
            if all(b.eigenvalue != e for e in self.eigen):
                self.eigen.append(b.eigenvalue)
        self.ys = [f"y{i}" for i in range(1, len(self.eigen) + 1)]
        self.tower_y = []
        for _, root, _ in sf.tower:
            idx = next(i for i, e in enumerate(self.eigen) if e == root)
            self.tower_y.append(idx)
        self._cache: dict = {}

    def y(self, idx: int) -> MultiPoly:
        return MultiPoly.var(self.names, self.ys[idx])

    def eigen_index(self, lam: AlgebraicNumber) -> int:
        return next(i for i, e in enumerate(self.eigen) if e == lam)

    def __call__(self, c) -> MultiPoly:
        if not isinstance(c, AlgebraicNumber) or c.is_rational():
            return MultiPoly.const(self.names, c if not isinstance(c, AlgebraicNumber) else c.to_fraction())
        key = tuple(c.coords)
        if key not in self._cache:
            acc = MultiPoly(self.names)
            for exps, q in self.sf.tower_coordinates(c).items():
                term = MultiPoly.const(self.names, q)
                for idx, e in zip(self.tower_y, exps):
                    if e:
                        term = term * self.y(idx) ** e
                acc = acc + term
            self._cache[key] = acc
        return self._cache[key]

    def matrix(self, M: Matrix) -> list[list[MultiPoly]]:
        return [[self(a) for a in row] for row in M.rows]


def _matmul(A: list[list[MultiPoly]], B: list[list[MultiPoly]]) -> list[list[MultiPoly]]:
    n, m = len(A), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = MultiPoly(A[0][0].vars)
            for k in range(len(B)):
                if not A[i][k].is_zero() and not B[k][j].is_zero():
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def rationalize_closure(res: ClosureResult) -> list[MultiPoly]:
    """Rational generators in ``x`` and ``y`` whose projection to ``x`` is the main component."""
    jd, cd = res.jordan, res.convenient
    d = res.loop.dim
    xs = x_vars(d)
    if jd is None:
        res.rational_gens = list(res.main_gens)
        return res.rational_gens
    eigen = []
    for b in jd.nonzero_blocks:
        if all(b.eigenvalue != e for e in eigen):
            eigen.append(b.eigenvalue)
    names = xs + tuple(f"y{i}" for i in range(1, len(eigen) + 1))
    tau = _Tau(res, names)
    gens: list[MultiPoly] = []
    # tau(S): the main generators with symbolic transform entries
    tA = tau.matrix(res.A)
    images = []
    for row in tA:
        acc = MultiPoly(names)
        for j, a in enumerate(row):
            if not a.is_zero():
                acc = acc + a * MultiPoly.var(names, j)
        images.append(acc)
    gens.extend(g.substitute(images) for g in res.ideal_r)
    # conjugate classes: elementary symmetric functions match the minimal polynomial
    classes: dict = {}
    for idx, lam in enumerate(tau.eigen):
        classes.setdefault(tuple(coeff_list(lam.minpoly())), []).append(idx)
    for coeffs, members in classes.items():
        deg = len(coeffs) - 1
        if len(members) != deg:
            raise ArithmeticError("an eigenvalue class is missing conjugates")
        esym = [MultiPoly.const(names, 1)]
        for idx in members:
            y = tau.y(idx)
            nxt = [esym[0]]
            for k in range(1, len(esym)):
                nxt.append(esym[k] + esym[k - 1] * y)
            nxt.append(esym[-1] * y)
            esym = nxt
        for k in range(1, deg + 1):
            gens.append(esym[k] - ((-1) ** k) * coeffs[deg - k])
    # tau(S1): lattice relations between eigenvalues
    if res.lattice is not None:
        active = [i for i, (b, k) in enumerate(zip(jd.blocks, cd.k)) if not b.is_zero and k > 0]
        for v in res.lattice.vectors:
            e = [0] * len(tau.eigen)
            for coef, i in zip(v, active):
                e[tau.eigen_index(jd.blocks[i].eigenvalue)] += coef
            if any(e):
                plus = tuple([0] * d + [max(a, 0) for a in e])
                minus = tuple([0] * d + [max(-a, 0) for a in e])
                gens.append(MultiPoly(names, {plus: 1}) - MultiPoly(names, {minus: 1}))
    # tau(P J P^-1) = M and tau(P) tau(P^-1) = I
    tP, tPinv = tau.matrix(jd.P), tau.matrix(jd.Pinv)
    tJ = []
    for r in range(d):
        row = []
        for c in range(d):
            a = jd.J.rows[r][c]
            if r == c:
                blk = next(b for b in jd.blocks if r in b.indices)
                row.append(MultiPoly(names) if blk.is_zero else tau.y(tau.eigen_index(blk.eigenvalue)))
            else:
                row.append(tau(a))
        tJ.append(row)
    PJPinv = _matmul(_matmul(tP, tJ), tPinv)
    PPinv = _matmul(tP, tPinv)
    for r in range(d):
        for c in range(d):
            gens.append(PJPinv[r][c] - res.loop.update[r][c])
            gens.append(PPinv[r][c] - (1 if r == c else 0))
    # tau(U P^-1) M^n0 alpha = beta
    tUPinv = tau.matrix(res.convenient.U @ jd.Pinv)
    start = res.loop.point(jd.isolated_count)
    for r in range(d):
        acc = MultiPoly(names)
        for c in range(d):
            acc = acc + tUPinv[r][c] * start[c]
        gens.append(acc - cd.beta[r])
    out = _dedupe([g.normalized() for g in gens if not g.is_zero()])
    res.rational_gens = out
    res.y_eigenvalues = list(tau.eigen)
    return out
