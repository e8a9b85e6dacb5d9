"""Sparse multivariate polynomials with rational or number-field coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

from .numbers import AlgebraicNumber, NumberField, fraction


class ParseError(ValueError):
    """Malformed polynomial or loop text."""


Monomial = tuple[int, ...]


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, AlgebraicNumber) else c == 0


class MultiPoly:
    """Polynomial as ``{exponent tuple: coefficient}`` over a fixed tuple of variable names."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.vars = tuple(variables)
        self.terms = {}
        n = len(self.vars)
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise ValueError("exponent vector length does not match the variables")
            if not isinstance(c, AlgebraicNumber):
                c = fraction(c)
            if not _is_zero(c):
                self.terms[tuple(m)] = c

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str | int) -> "MultiPoly":
        i = name if isinstance(name, int) else list(variables).index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    def _wrap(self, terms: dict) -> "MultiPoly":
        p = MultiPoly.__new__(MultiPoly)
        p.vars = self.vars
        p.terms = terms
        return p

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return MultiPoly.const(self.vars, other)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "MultiPoly":
        o = self._coerce(other)
        terms = dict(self.terms)
        for m, c in o.terms.items():
            if m in terms:
                s = terms[m] + c
                if _is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return self._wrap(terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            if _is_zero(other):
                return self._wrap({})
            return self._wrap({m: c * other for m, c in self.terms.items()})
        o = self._coerce(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                if m in terms:
                    terms[m] = terms[m] + c
                else:
                    terms[m] = c
        return self._wrap({m: c for m, c in terms.items() if not _is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result, base = MultiPoly.const(self.vars, 1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.vars, other)
        if self.vars != other.vars or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.keys())))

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def used_vars(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def is_rational(self) -> bool:
        return all(not isinstance(c, AlgebraicNumber) or c.is_rational() for c in self.terms.values())

    def to_rational(self) -> "MultiPoly":
        return self._wrap({m: c.to_fraction() if isinstance(c, AlgebraicNumber) else c
                           for m, c in self.terms.items()})

    # transformations ----------------------------------------------------
    def rename(self, variables: Sequence[str], mapping: Sequence[int] | None = None) -> "MultiPoly":
        """Move into ``variables``; variable ``i`` goes to index ``mapping[i]`` (default: by name)."""
        if mapping is None:
            mapping = [list(variables).index(v) for v in self.vars]
        n = len(variables)
        terms = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    e[mapping[i]] += k
            terms[tuple(e)] = c
        return MultiPoly(variables, terms)

    def map_coeffs(self, f: Callable) -> "MultiPoly":
        return MultiPoly(self.vars, {m: f(c) for m, c in self.terms.items()})

    def evaluate(self, point: Sequence):
        """Exact value at ``point`` (one entry per variable)."""
        if len(point) != len(self.vars):
            raise ValueError("point dimension does not match the number of variables")
        powers: dict = {}

        def pw(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = point[i] ** e
            return powers[key]

        acc = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = t * pw(i, e)
            acc = t + acc
        return acc

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace variable ``i`` by ``images[i]`` (all images share one variable tuple)."""
        if len(images) != len(self.vars):
            raise ValueError("need one image per variable")
        target = images[0].vars if images else self.vars
        cache: dict = {}

        def pw(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = images[i] ** e
            return cache[(i, e)]

        acc = MultiPoly(target)
        for m, c in self.terms.items():
            t = MultiPoly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    t = t * pw(i, e)
            acc = acc + t
        return acc

    def substitute_linear(self, A, variables: Sequence[str] | None = None) -> "MultiPoly":
        """``p(A x)`` for a square matrix ``A`` (rows of coefficients)."""
        rows = A.rows if hasattr(A, "rows") else A
        n = len(self.vars)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("matrix dimension does not match the number of variables")
        target = tuple(variables) if variables is not None else self.vars
        images = []
        for r in rows:
            terms = {}
            for j, a in enumerate(r):
                e = [0] * len(target)
                e[j] = 1
                terms[tuple(e)] = a
            images.append(MultiPoly(target, terms))
        return self.substitute(images)

    def components(self, field: NumberField) -> list["MultiPoly"]:
        """Rational polynomials ``p_j`` with ``self = sum p_j * theta**j``."""
        D = field.degree
        comps = [dict() for _ in range(D)]
        for m, c in self.terms.items():
            coords = c.coords if isinstance(c, AlgebraicNumber) else (c,) + (Fraction(0),) * (D - 1)
            for j, q in enumerate(coords):
                if q:
                    comps[j][m] = q
        return [MultiPoly(self.vars, t) for t in comps]

    def coefficient_field(self) -> NumberField | None:
        for c in self.terms.values():
            if isinstance(c, AlgebraicNumber) and not c.is_rational():
                return c.field
        return None

    def normalized(self) -> "MultiPoly":
        """Integer coefficients, content 1, positive leading coefficient (grevlex)."""
        if not self.terms or not self.is_rational():
            return self
        p = self.to_rational()
        den = lcm(*(c.denominator for c in p.terms.values()))
        num = 0
        for c in p.terms.values():
            num = gcd(num, c.numerator)
        scale = Fraction(den, num)
        lead = max(p.terms, key=grevlex_key)
        if p.terms[lead] < 0:
            scale = -scale
        return p * scale

    def monic(self, order=None) -> "MultiPoly":
        order = order or grevlex_key
        lead = max(self.terms, key=order)
        inv = 1 / self.terms[lead]
        return self * inv

    # text ----------------------------------------------------------------
    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"MultiPoly({to_text(self)!r})"


def grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


# --------------------------------------------------------------------------- printing


def _fmt_coeff(c, coeff_var: str) -> tuple[str, bool]:
    """Text of a coefficient and whether it is a compound expression."""
    if isinstance(c, AlgebraicNumber):
        if c.is_rational():
            c = c.to_fraction()
        else:
            return "(" + _uni_text(c.coords, coeff_var) + ")", True
    return str(c), False


def _uni_text(coords: Sequence[Fraction], var: str) -> str:
    parts = []
    for j in range(len(coords) - 1, -1, -1):
        q = coords[j]
        if not q:
            continue
        mono = "" if j == 0 else (var if j == 1 else f"{var}^{j}")
        parts.append(_signed_term(q, mono))
    return _join(parts)


def _signed_term(q: Fraction, mono: str) -> tuple[bool, str]:
    neg = q < 0
    a = abs(q)
    if not mono:
        return neg, str(a)
    if a == 1:
        return neg, mono
    return neg, f"{a}*{mono}"


def _join(parts: list[tuple[bool, str]]) -> str:
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, s in parts[1:]:
        out += (" - " if neg else " + ") + s
    return out


def _mono_text(vars_: Sequence[str], m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(vars_, m) if e)


def to_text(p: MultiPoly, coeff_var: str = "t") -> str:
    """Render in the shared grammar; algebraic coefficients become polynomials in ``coeff_var``."""
    if not p.terms:
        return "0"
    parts = []
    for m in sorted(p.terms, key=grevlex_key, reverse=True):
        c = p.terms[m]
        mono = _mono_text(p.vars, m)
        text, compound = _fmt_coeff(c, coeff_var)
        if compound:
            parts.append((False, text + ("*" + mono if mono else "")))
        else:
            parts.append(_signed_term(Fraction(text), mono))
    return _join(parts)


# --------------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()/]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str], variables: Sequence[str], coeff: Mapping[str, MultiPoly]):
        self.toks, self.i = tokens, 0
        self.vars = tuple(variables)
        self.coeff = coeff

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return tok

    def expr(self) -> MultiPoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        acc = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.power()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants")
                acc = acc * (1 / rhs.terms[(0,) * len(self.vars)])
        return acc

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer, got {tok!r}")
            base = base ** int(tok)
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        if tok == "(":
            e = self.expr()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return e
        if tok == "-":
            return -self.atom()
        if tok[0].isdigit():
            return MultiPoly.const(self.vars, Fraction(tok))
        if tok in self.vars:
            return MultiPoly.var(self.vars, tok)
        if tok in self.coeff:
            return self.coeff[tok]
        raise ParseError(f"unknown variable {tok!r}")


def parse_poly(text: str, variables: Sequence[str], field: NumberField | None = None,
               coeff_var: str = "t") -> MultiPoly:
    """Parse one polynomial; with ``field`` the symbol ``coeff_var`` names its primitive element."""
    text = text.split("#", 1)[0]
    if not text.strip():
        raise ParseError("empty polynomial")
    coeff = {}
    if field is not None:
        coeff[coeff_var] = MultiPoly.const(variables, field.gen)
    parser = _Parser(_tokenize(text), variables, coeff)
    p = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"unexpected token {parser.peek()!r}")
    if field is not None:
        p = p.map_coeffs(lambda c: field(c) if not isinstance(c, AlgebraicNumber) else c)
    return p


def parse_ideal(text: str, variables: Sequence[str] | None = None, field: NumberField | None = None) -> list[MultiPoly]:
    """One polynomial per line, ``#`` comments; variables default to the ``x``/``y`` names used."""
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if variables is None:
        variables = infer_variables(lines)
    return [parse_poly(ln, variables, field) for ln in lines]


_VAR = re.compile(r"\b([xy])(\d+)\b")


def infer_variables(lines: Iterable[str], dim: int | None = None) -> tuple[str, ...]:
    """``x1..xd`` (``d`` = max index seen or ``dim``) followed by any ``y`` variables seen."""
    xs, ys = 0, 0
    for ln in lines:
        for kind, idx in _VAR.findall(ln):
            if kind == "x":
                xs = max(xs, int(idx))
            else:
                ys = max(ys, int(idx))
    if dim is not None:
        if xs > dim:
            raise ParseError(f"variable x{xs} exceeds dimension {dim}")
        xs = dim
    return x_vars(xs) + tuple(f"y{i}" for i in range(1, ys + 1))


def x_vars(d: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, d + 1))
