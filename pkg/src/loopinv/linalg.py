"""Exact matrices over number fields and the convenient Jordan decomposition of a loop."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from flint import fmpq_mat

from .numbers import (
    AlgebraicNumber,
    NumberField,
    RATIONALS,
    SplittingField,
    factor_rational_poly,
    fraction,
    splitting_field,
    to_fmpq,
)


class Matrix:
    """Dense matrix with entries in one number field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: NumberField, rows: Sequence[Sequence]):
        self.field = field
        self.rows = [[field(x) for x in row] for row in rows]

    @classmethod
    def identity(cls, field: NumberField, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: NumberField, n: int, m: int | None = None) -> "Matrix":
        return cls(field, [[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def from_columns(cls, field: NumberField, cols: Sequence[Sequence]) -> "Matrix":
        return cls(field, [list(r) for r in zip(*cols)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, [[a * c for a in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            n, k = self.shape
            k2, m = other.shape
            if k != k2:
                raise ValueError("dimension mismatch")
            cols = [other.column(j) for j in range(m)]
            return Matrix(self.field, [[_dot(r, c, self.field) for c in cols] for r in self.rows])
        return [_dot(r, other, self.field) for r in self.rows]

    def __pow__(self, n: int) -> "Matrix":
        result, base = Matrix.identity(self.field, self.shape[0]), self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.rows)])

    def map(self, f) -> "Matrix":
        return Matrix(self.field if not hasattr(f, "target") else f.target,
                      [[f(a) for a in r] for r in self.rows])

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form; pivot on the first nonzero entry of each column."""
        rows = [list(r) for r in self.rows]
        n, m = self.shape
        pivots: list[int] = []
        rank = 0
        for j in range(m):
            p = next((i for i in range(rank, n) if not rows[i][j].is_zero()), None)
            if p is None:
                continue
            rows[rank], rows[p] = rows[p], rows[rank]
            inv = rows[rank][j].inverse()
            rows[rank] = [a * inv for a in rows[rank]]
            for i in range(n):
                if i != rank and not rows[i][j].is_zero():
                    c = rows[i][j]
                    rows[i] = [a - c * b for a, b in zip(rows[i], rows[rank])]
            pivots.append(j)
            rank += 1
            if rank == n:
                break
        return Matrix(self.field, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[list[AlgebraicNumber]]:
        """Basis of the right null space, one vector per free column."""
        R, pivots = self.rref()
        m = self.shape[1]
        free = [j for j in range(m) if j not in pivots]
        basis = []
        for f in free:
            v = [self.field.zero] * m
            v[f] = self.field.one
            for row, p in enumerate(pivots):
                v[p] = -R.rows[row][f]
            basis.append(v)
        return basis

    def inverse(self) -> "Matrix":
        n = self.shape[0]
        aug = Matrix(self.field, [r + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)])
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, [r[n:] for r in R.rows])

    def __repr__(self) -> str:
        return "Matrix(" + repr([[str(a) for a in r] for r in self.rows]) + ")"


def _dot(r, c, field):
    acc = field.zero
    for a, b in zip(r, c):
        if not a.is_zero() and not (isinstance(b, AlgebraicNumber) and b.is_zero()):
            acc = acc + a * b
    return acc


def block_diag(field: NumberField, blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.shape[0] for b in blocks)
    rows = [[field.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = b.shape[0]
        for i in range(k):
            for j in range(k):
                rows[off + i][off + j] = b.rows[i][j]
        off += k
    return Matrix(field, rows)


# --------------------------------------------------------------------------- loops


@dataclass(frozen=True)
class Loop:
    """``x <- init; while true: x <- update @ x`` over the rationals."""

    update: tuple[tuple[Fraction, ...], ...]
    init: tuple[Fraction, ...]

    def __init__(self, update, init):
        M = tuple(tuple(fraction(x) for x in row) for row in update)
        a = tuple(fraction(x) for x in init)
        d = len(a)
        if d < 1 or len(M) != d or any(len(r) != d for r in M):
            raise ValueError("loop update must be a square d x d matrix with d = len(init) >= 1")
        object.__setattr__(self, "update", M)
        object.__setattr__(self, "init", a)

    @property
    def dim(self) -> int:
        return len(self.init)

    def flint_matrix(self) -> fmpq_mat:
        d = self.dim
        return fmpq_mat(d, d, [to_fmpq(x) for r in self.update for x in r])

    def matrix(self, field: NumberField = RATIONALS) -> Matrix:
        return Matrix(field, self.update)

    def power(self, n: int) -> fmpq_mat:
        return self.flint_matrix() ** n

    def point(self, n: int) -> tuple[Fraction, ...]:
        """The orbit point ``M**n @ init``."""
        v = self.power(n) * fmpq_mat(self.dim, 1, [to_fmpq(x) for x in self.init])
        return tuple(fraction(v[i, 0]) for i in range(self.dim))

    def orbit(self, n: int) -> list[tuple[Fraction, ...]]:
        """The first ``n`` orbit points."""
        M = self.flint_matrix()
        v = fmpq_mat(self.dim, 1, [to_fmpq(x) for x in self.init])
        out = []
        for _ in range(n):
            out.append(tuple(fraction(v[i, 0]) for i in range(self.dim)))
            v = M * v
        return out


# --------------------------------------------------------------------------- Jordan decomposition


@dataclass
class JordanBlock:
    eigenvalue: AlgebraicNumber
    size: int
    start: int  # offset of the block in the coordinates

    @property
    def indices(self) -> range:
        return range(self.start, self.start + self.size)

    @property
    def is_zero(self) -> bool:
        return self.eigenvalue.is_zero()


@dataclass
class JordanData:
    loop: Loop
    splitting: SplittingField
    P: Matrix
    Pinv: Matrix
    J: Matrix
    blocks: list[JordanBlock]
    zero_dim: int
    nil_index: int
    isolated_count: int
    gamma: list[AlgebraicNumber]
    Jtilde: Matrix

    @property
    def field(self) -> NumberField:
        return self.splitting.field

    @property
    def nonzero_blocks(self) -> list[JordanBlock]:
        return [b for b in self.blocks if not b.is_zero]


def jordan_block(field: NumberField, lam, size: int) -> Matrix:
    return Matrix(field, [[lam if i == j else (1 if j == i + 1 else 0) for j in range(size)]
                          for i in range(size)])


class _Span:
    """Incrementally maintained echelon basis for independence tests."""

    def __init__(self, field: NumberField, n: int):
        self.field, self.n = field, n
        self.rows: list[tuple[int, list]] = []

    def reduce(self, v: list) -> list:
        v = list(v)
        for p, row in self.rows:
            if not v[p].is_zero():
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v: list) -> bool:
        v = self.reduce(v)
        p = next((i for i, a in enumerate(v) if not a.is_zero()), None)
        if p is None:
            return False
        inv = v[p].inverse()
        v = [a * inv for a in v]
        self.rows = [(q, [a - r[p] * b for a, b in zip(r, v)] if not r[p].is_zero() else r)
                     for q, r in self.rows]
        self.rows.append((p, v))
        return True


def _jordan_chains(M: Matrix, lam: AlgebraicNumber, mult: int) -> list[list[list]]:
    """Jordan chains ``[B^(l-1) v, ..., B v, v]`` for eigenvalue ``lam`` (B = M - lam I)."""
    K = M.field
    n = M.shape[0]
    B = M - Matrix.identity(K, n).scale(lam)
    kernels = [[]]
    power = Matrix.identity(K, n)
    while len(kernels[-1]) < mult:
        power = power @ B
        kernels.append(power.kernel())
    top = len(kernels) - 1
    chains: list[list[list]] = []
    for level in range(top, 0, -1):
        span = _Span(K, n)
        for v in kernels[level - 1]:
            span.add(v)
        for ch in chains:
            span.add(ch[level - 1])
        for v in kernels[level]:
            if span.add(v):
                chain = [v]
                for _ in range(level - 1):
                    chain.insert(0, B @ chain[0])
                chains.append(chain)
    return chains


def _eigen_key(lam: AlgebraicNumber) -> tuple:
    return lam.sort_key()


def jordan_decomposition(loop: Loop, splitting: SplittingField | None = None) -> JordanData:
    """``M = P J P^-1`` with zero-eigenvalue blocks first, then a fixed deterministic order."""
    Mq = loop.flint_matrix()
    charpoly = Mq.charpoly()
    factors = factor_rational_poly(charpoly)
    sf = splitting or splitting_field([f for f, _ in factors])
    K = sf.field
    M = loop.matrix(K)
    entries = []  # (key, eigenvalue, chain)
    for f, mult in factors:
        for lam in sf.roots_of(f):
            for chain in _jordan_chains(M, lam, mult):
                entries.append((lam, chain))
    zero = [(lam, ch) for lam, ch in entries if lam.is_zero()]
    nonzero = [(lam, ch) for lam, ch in entries if not lam.is_zero()]
    zero.sort(key=lambda e: -len(e[1]))
    nonzero.sort(key=lambda e: (_eigen_key(e[0]), -len(e[1])))
    cols, blocks = [], []
    for lam, ch in zero + nonzero:
        blocks.append(JordanBlock(lam, len(ch), len(cols)))
        cols.extend(ch)
    P = Matrix.from_columns(K, cols)
    Pinv = P.inverse()
    J = block_diag(K, [jordan_block(K, b.eigenvalue, b.size) for b in blocks])
    d0 = sum(b.size for b in blocks if b.is_zero)
    m = max((b.size for b in blocks if b.is_zero), default=0)
    Jt = block_diag(K, [Matrix.zeros(K, b.size) if b.is_zero else jordan_block(K, b.eigenvalue, b.size)
                        for b in blocks])
    v = Pinv @ [K(a) for a in loop.init]
    seen: list[list] = []
    w = v
    for _ in range(m):
        if all(any(a != b for a, b in zip(w, s)) for s in seen):
            seen.append(w)
        w = J @ w
    n0 = len(seen) if d0 else 0
    gamma = v
    for _ in range(n0):
        gamma = J @ gamma
    return JordanData(loop, sf, P, Pinv, J, blocks, d0, m, n0, gamma, Jt)


# --------------------------------------------------------------------------- convenient form


def fingerprint(v: Sequence, sizes: Sequence[int]) -> list[int]:
    """Per block, a single 1 at the last nonzero entry (zero blocks stay zero)."""
    out, off = [], 0
    for s in sizes:
        block = v[off:off + s]
        last = max((i for i, a in enumerate(block) if not _is_zero(a)), default=None)
        out.extend(1 if i == last else 0 for i in range(s))
        off += s
    return out


def _is_zero(a) -> bool:
    return a.is_zero() if isinstance(a, AlgebraicNumber) else a == 0


@dataclass
class ConvenientData:
    U: Matrix
    Uinv: Matrix
    beta: list[int]
    k: list[int]  # per block, 1-based position of the 1 in beta (0 if the block of beta is zero)


def _toeplitz_block(K: NumberField, g: Sequence[AlgebraicNumber]) -> Matrix:
    size = len(g)
    r = max((i for i, a in enumerate(g) if not a.is_zero()), default=None)
    if r is None:
        return Matrix.identity(K, size)
    inv = g[r].inverse()
    u = [inv]
    for k in range(1, r + 1):
        acc = K.zero
        for l in range(k):
            acc = acc + u[l] * g[r - k + l]
        u.append(-acc * inv)
    u += [K.zero] * (size - len(u))
    return Matrix(K, [[u[j - i] if j >= i else 0 for j in range(size)] for i in range(size)])


def convenient_u(jd: JordanData) -> ConvenientData:
    """Block Toeplitz ``U`` commuting with ``J`` such that ``U @ gamma`` is the fingerprint."""
    K = jd.field
    blocks = [_toeplitz_block(K, jd.gamma[b.start:b.start + b.size]) for b in jd.blocks]
    U = block_diag(K, blocks)
    Uinv = block_diag(K, [B.inverse() for B in blocks])
    beta = fingerprint(jd.gamma, [b.size for b in jd.blocks])
    k = []
    for b in jd.blocks:
        part = beta[b.start:b.start + b.size]
        k.append(part.index(1) + 1 if 1 in part else 0)
    return ConvenientData(U, Uinv, beta, k)


def stirling_coeffs(k: int) -> list[int]:
    """``c_{k,1..k}`` with ``n**k == sum(c_{k,i} * C(n, i))``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    c = [1]
    for _ in range(k - 1):
        c = [i * ((c[i - 1] if i - 1 < len(c) else 0) + (c[i - 2] if i >= 2 else 0))
             for i in range(1, len(c) + 2)]
    return c


def r_block(K: NumberField, lam: AlgebraicNumber, size: int, k: int) -> Matrix:
    """Transform turning ``J^n e_k`` into ``(n^(k-1) lam^n, ..., lam^n, 0, ...)``."""
    rows = [[K.one if i == j else K.zero for j in range(size)] for i in range(size)]
    for r in range(1, k):
        st = stirling_coeffs(k - r)
        rows[r - 1][r - 1] = K.zero
        for c in range(r, k):
            rows[r - 1][c - 1] = lam ** (k - c) * st[k - c - 1]
    return Matrix(K, rows)


@dataclass
class RData:
    R: Matrix
    Rinv: Matrix


def build_r(jd: JordanData, cd: ConvenientData) -> RData:
    K = jd.field
    blocks = []
    for b, k in zip(jd.blocks, cd.k):
        if b.is_zero or k <= 1:
            blocks.append(Matrix.identity(K, b.size))
        else:
            blocks.append(r_block(K, b.eigenvalue, b.size, k))
    return RData(block_diag(K, blocks), block_diag(K, [B.inverse() for B in blocks]))


def only_powers_closed_form(lam: AlgebraicNumber, size: int, k: int, n: int) -> list[AlgebraicNumber]:
    """``(n^(k-1) lam^n, ..., n lam^n, lam^n, 0, ..., 0)`` for one block."""
    K = lam.field
    ln = lam**n
    return [ln * n ** (k - 1 - i) for i in range(k)] + [K.zero] * (size - k)


def binomial_check(k: int, n: int) -> bool:
    return n**k == sum(c * comb(n, i + 1) for i, c in enumerate(stirling_coeffs(k)))
