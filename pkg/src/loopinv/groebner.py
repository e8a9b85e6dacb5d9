"""Buchberger's algorithm over the rationals, ideal and radical membership.

Internally a polynomial is a dict ``{monomial: gmpy2.mpq}``; the public
functions accept and return :class:`MultiPoly` values with Fraction
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from gmpy2 import mpq

from .poly import MultiPoly, grevlex_key

Monomial = tuple[int, ...]


class ResourceLimitError(RuntimeError):
    """A configured search or iteration cap was exceeded."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# --------------------------------------------------------------------------- monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``name`` is ``grevlex``, ``lex`` or ``block:k`` (first ``k`` variables eliminated)."""

    name: str = "grevlex"

    def key(self, nvars: int) -> Callable[[Monomial], tuple]:
        if self.name == "grevlex":
            return grevlex_key
        if self.name == "lex":
            return lambda m: m
        if self.name.startswith("block:"):
            k = int(self.name.split(":")[1])
            return lambda m: (grevlex_key(m[:k]), grevlex_key(m[k:]))
        raise ValueError(f"unknown monomial order {self.name!r}")


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder(f"block:{k}")


# --------------------------------------------------------------------------- internal arithmetic


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _Ring:
    def __init__(self, nvars: int, order: MonomialOrder):
        self.n = nvars
        self._key = order.key(nvars)
        self._cache: dict = {}

    def key(self, m: Monomial):
        k = self._cache.get(m)
        if k is None:
            k = self._cache[m] = self._key(m)
        return k

    def lead(self, p: dict) -> Monomial:
        return max(p, key=self.key)

    def monic(self, p: dict) -> dict:
        lc = p[self.lead(p)]
        if lc == 1:
            return p
        inv = 1 / lc
        return {m: c * inv for m, c in p.items()}

    def reduce(self, p: dict, basis: list[tuple[Monomial, dict]], full: bool = True) -> dict:
        """Remainder of ``p`` modulo ``basis`` (monic elements given with their leading monomials)."""
        p = dict(p)
        rem: dict = {}
        key = self.key
        while p:
            lm = max(p, key=key)
            c = p[lm]
            for glm, g in basis:
                if _divides(glm, lm):
                    shift = _sub(lm, glm)
                    for gm, gc in g.items():
                        m = tuple(a + b for a, b in zip(gm, shift))
                        v = p.get(m, 0) - c * gc
                        if v:
                            p[m] = v
                        else:
                            p.pop(m, None)
                    break
            else:
                rem[lm] = c
                del p[lm]
                if not full:
                    rem.update(p)
                    return rem
        return rem

    def spoly(self, f: tuple[Monomial, dict], g: tuple[Monomial, dict]) -> dict:
        (fl, fp), (gl, gp) = f, g
        l = _lcm(fl, gl)
        sf, sg = _sub(l, fl), _sub(l, gl)
        out: dict = {}
        for m, c in fp.items():
            out[tuple(a + b for a, b in zip(m, sf))] = c
        for m, c in gp.items():
            mm = tuple(a + b for a, b in zip(m, sg))
            v = out.get(mm, 0) - c
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out


def _to_internal(p: MultiPoly) -> dict:
    out = {}
    for m, c in p.terms.items():
        if not isinstance(c, Fraction):
            c = c.to_fraction()
        out[m] = mpq(c.numerator, c.denominator)
    return out


def _to_multipoly(vars_: Sequence[str], p: dict) -> MultiPoly:
    return MultiPoly(vars_, {m: Fraction(int(c.numerator), int(c.denominator)) for m, c in p.items()})


# --------------------------------------------------------------------------- Buchberger


@dataclass
class GroebnerBasis:
    basis: list[MultiPoly]
    order: MonomialOrder
    vars: tuple[str, ...]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and not self.basis[0].is_zero()

    def reduce(self, f: MultiPoly) -> MultiPoly:
        ring = _Ring(len(self.vars), self.order)
        internal = [(ring.lead(g), g) for g in map(_to_internal, self.basis)]
        return _to_multipoly(self.vars, ring.reduce(_to_internal(f), internal))

    def contains(self, f: MultiPoly) -> bool:
        return self.reduce(f).is_zero()

    def leading_monomials(self) -> list[Monomial]:
        ring = _Ring(len(self.vars), self.order)
        return [ring.lead(_to_internal(g)) for g in self.basis]


def _buchberger_internal(ring: _Ring, gens: list[dict], max_pairs: int | None) -> list[dict]:
    G: list[tuple[Monomial, dict]] = []
    for g in gens:
        if g:
            g = ring.monic(g)
            G.append((ring.lead(g), g))
    if any(not any(lm) for lm, _ in G):
        return [{(0,) * ring.n: mpq(1)}]
    # inter-reduce the input first; keeps the pair queue small
    G = _autoreduce(ring, G)
    if any(not any(lm) for lm, _ in G):
        return [{(0,) * ring.n: mpq(1)}]
    active = list(range(len(G)))
    pairs: list[tuple[int, int]] = [(i, j) for j in range(len(G)) for i in range(j)]
    done: set[tuple[int, int]] = set()
    processed = 0
    while pairs:
        idx = min(range(len(pairs)), key=lambda t: ring.key(_lcm(G[pairs[t][0]][0], G[pairs[t][1]][0])))
        i, j = pairs.pop(idx)
        done.add((i, j))
        li, lj = G[i][0], G[j][0]
        if _coprime(li, lj):
            continue
        l = _lcm(li, lj)
        if any(k != i and k != j and k in active and _divides(G[k][0], l)
               and _pair(i, k) in done and _pair(j, k) in done for k in range(len(G))):
            continue
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise ResourceLimitError("Groebner basis computation exceeded its pair limit")
        h = ring.reduce(ring.spoly(G[i], G[j]), [G[k] for k in active])
        if not h:
            continue
        h = ring.monic(h)
        lh = ring.lead(h)
        if not any(lh):
            return [{(0,) * ring.n: mpq(1)}]
        G.append((lh, h))
        new = len(G) - 1
        active.append(new)
        pairs.extend((k, new) for k in active if k != new)
    return [g for _, g in _interreduce(ring, [G[k] for k in active])]


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _autoreduce(ring: _Ring, G: list[tuple[Monomial, dict]]) -> list[tuple[Monomial, dict]]:
    """Reduce each generator by the others until nothing changes."""
    G = list(G)
    changed = True
    while changed:
        changed = False
        for idx in range(len(G)):
            lm, g = G[idx]
            r = ring.reduce(g, G[:idx] + G[idx + 1:])
            if r != g:
                changed = True
                if r:
                    r = ring.monic(r)
                    G[idx] = (ring.lead(r), r)
                else:
                    G.pop(idx)
                break
    return G


def _interreduce(ring: _Ring, G: list[tuple[Monomial, dict]]) -> list[tuple[Monomial, dict]]:
    G = sorted(G, key=lambda t: ring.key(t[0]))
    minimal: list[tuple[Monomial, dict]] = []
    for lm, g in G:
        if not any(_divides(l2, lm) for l2, _ in minimal):
            minimal = [(l2, g2) for l2, g2 in minimal if not _divides(lm, l2)]
            minimal.append((lm, g))
    out = []
    for idx, (lm, g) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        r = ring.reduce(g, others)
        if r:
            r = ring.monic(r)
            out.append((ring.lead(r), r))
    out.sort(key=lambda t: ring.key(t[0]), reverse=True)
    return out


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = GREVLEX,
               max_pairs: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis (monic elements) of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis([], order, ())
    vars_ = gens[0].vars
    ring = _Ring(len(vars_), order)
    basis = _buchberger_internal(ring, [_to_internal(g) for g in gens], max_pairs)
    return GroebnerBasis([_to_multipoly(vars_, g) for g in basis], order, vars_)


def groebner_basis(gens: Sequence[MultiPoly], order: MonomialOrder = GREVLEX, **kw) -> GroebnerBasis:
    return buchberger(gens, order, **kw)


def ideal_membership(f: MultiPoly, gb: GroebnerBasis) -> bool:
    if f.is_zero():
        return True
    if not gb.basis:
        return False
    return gb.contains(f)


def is_empty_variety(gens: Sequence[MultiPoly]) -> bool:
    """True iff 1 lies in the ideal, i.e. no common complex zero."""
    return buchberger(gens).is_unit()


def radical_membership(f: MultiPoly, gens: Sequence[MultiPoly], gb: GroebnerBasis | None = None) -> bool:
    """``f`` vanishes on the variety of ``gens`` (Rabinowitsch: 1 in gens + (1 - t f))."""
    if f.is_zero():
        return True
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    if gb is None:
        gb = buchberger(gens)
    if gb.is_unit() or gb.contains(f):
        return True
    vars_ = gens[0].vars
    name = "_t"
    while name in vars_:
        name += "_"
    ext = vars_ + (name,)
    lifted = [g.rename(ext) for g in gb.basis]
    t = MultiPoly.var(ext, name)
    return is_empty_variety(lifted + [1 - t * f.rename(ext)])


def eliminate(gens: Sequence[MultiPoly], k: int) -> list[MultiPoly]:
    """Generators of the ideal intersected with the ring of the variables after the first ``k``."""
    gb = buchberger(gens, block_order(k))
    keep = gb.vars[k:]
    return [g.rename(keep, [None] * k + list(range(len(keep))))  # type: ignore[list-item]
            for g in gb.basis if not any(m[:k] != (0,) * k for m in g.terms)]


def spoly_reduces_to_zero(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion, checked pair by pair."""
    ring = _Ring(len(gb.vars), gb.order)
    G = [(ring.lead(g), g) for g in map(_to_internal, gb.basis)]
    for j in range(len(G)):
        for i in range(j):
            if ring.reduce(ring.spoly(G[i], G[j]), G):
                return False
    return True
