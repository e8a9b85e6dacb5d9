"""Loop documents, ideal files and result documents."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .closure import ClosureResult
from .linalg import Loop
from .numbers import NumberField, isolate_roots, upoly
from .poly import MultiPoly, ParseError, parse_ideal, parse_poly, to_text, x_vars


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise ParseError(f"not a rational number: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ParseError(f"rationals must be given as strings or integers, got {s!r}")
    try:
        q = Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational {s!r}") from exc
    if "." in s or "e" in s.lower():
        raise ParseError(f"malformed rational {s!r}: use p/q")
    return q


def parse_loop(text: str) -> Loop:
    """``{"dim": d, "matrix": [[...], ...], "init": [...]}`` with string rationals."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"loop document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not {"dim", "matrix", "init"} <= doc.keys():
        raise ParseError("loop document needs keys dim, matrix and init")
    d = doc["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParseError("dim must be a positive integer")
    M, a = doc["matrix"], doc["init"]
    if not isinstance(M, list) or len(M) != d or any(not isinstance(r, list) or len(r) != d for r in M):
        raise ParseError(f"matrix must be {d} rows of {d} entries")
    if not isinstance(a, list) or len(a) != d:
        raise ParseError(f"init must have {d} entries")
    return Loop([[parse_rational(x) for x in r] for r in M], [parse_rational(x) for x in a])


def dump_loop(loop: Loop) -> str:
    return json.dumps({"dim": loop.dim, "matrix": [[str(x) for x in r] for r in loop.update],
                       "init": [str(x) for x in loop.init]})


def read_ideal(text: str, dim: int) -> list[MultiPoly]:
    try:
        return parse_ideal(text, x_vars(dim))
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from exc


def dump_ideal(polys: list[MultiPoly]) -> str:
    return "\n".join(to_text(p) for p in polys) + "\n"


# --------------------------------------------------------------------------- closure documents


def upoly_text(p, var: str = "t") -> str:
    """A univariate rational polynomial in the same syntax the parser reads."""
    terms = {(i,): Fraction(int(c.p), int(c.q)) for i, c in enumerate(p.coeffs()) if c != 0}
    return to_text(MultiPoly((var,), terms))


def _field_doc(K: NumberField) -> dict | None:
    if K.degree == 1:
        return None
    box = K.box
    return {"minpoly": upoly_text(K.minpoly), "root": [str(box.re), str(box.im)],
            "root_approx": [float(box.re), float(box.im)]}


def closure_document(cr: ClosureResult, rationalize: bool = False) -> dict:
    field = _field_doc(cr.field)
    doc = {
        "kind": "closure",
        "dim": cr.loop.dim,
        "field": field,
        "isolated_points": [[str(c) for c in pt] for pt in cr.isolated_points],
        "main": [to_text(g) for g in cr.main_gens],
        "completeness": cr.completeness,
        "caveat": cr.caveat,
    }
    if rationalize and cr.rational_gens is not None:
        doc["rational"] = [to_text(g) for g in cr.rational_gens]
        doc["rational_vars"] = list(cr.rational_gens[0].vars) if cr.rational_gens else list(x_vars(cr.loop.dim))
        doc["y_eigenvalues"] = [{"minpoly": upoly_text(lam.minpoly()),
                                 "approx": [lam.approx_complex().real, lam.approx_complex().imag]}
                                for lam in cr.y_eigenvalues]
    return doc


def field_from_doc(doc: dict | None) -> NumberField | None:
    """Rebuild the number field of a closure document from its minimal polynomial and root."""
    if doc is None:
        return None
    mp = parse_poly(doc["minpoly"], ("t",))
    coeffs = [Fraction(0)] * (mp.total_degree() + 1)
    for m, c in mp.terms.items():
        coeffs[m[0]] = c
    p = upoly(coeffs)
    re, im = (Fraction(x) for x in doc["root"])
    target = complex(float(re), float(im))
    roots = isolate_roots(p)
    best = min(roots, key=lambda r: abs(complex(float(r.real.mid()), float(r.imag.mid())) - target))
    return NumberField(p, best)


def parse_closure_document(doc: dict) -> dict:
    """Parsed view of a closure document: points, main generators (over the field) and rational generators."""
    d = doc["dim"]
    K = field_from_doc(doc.get("field"))
    xs = x_vars(d)
    out = {
        "field": K,
        "isolated_points": [tuple(Fraction(c) for c in pt) for pt in doc["isolated_points"]],
        "main": [parse_poly(s, xs, K) for s in doc["main"]],
    }
    if "rational" in doc:
        names = tuple(doc["rational_vars"])
        out["rational"] = [parse_poly(s, names) for s in doc["rational"]]
    return out


def closure_text(cr: ClosureResult, rationalize: bool = False) -> str:
    lines = [f"# closure of a {cr.loop.dim}-dimensional loop"]
    if cr.field.degree > 1:
        box = cr.field.box
        lines.append(f"# field: t is the root of {upoly_text(cr.field.minpoly)} "
                     f"near {float(box.re):.12g} + {float(box.im):.12g}i")
    lines.append(f"# lattice: {cr.completeness}")
    if cr.caveat:
        lines.append(f"# caveat: {cr.caveat}")
    lines.append(f"# isolated points: {len(cr.isolated_points)}")
    for pt in cr.isolated_points:
        lines.append("point " + " ".join(str(c) for c in pt))
    if rationalize and cr.rational_gens is not None:
        lines.append("# rational generators in x and y (one y per distinct nonzero eigenvalue)")
        for lam, name in zip(cr.y_eigenvalues, [f"y{i}" for i in range(1, len(cr.y_eigenvalues) + 1)]):
            z = lam.approx_complex()
            lines.append(f"# {name}: root of {upoly_text(lam.minpoly())} near {z.real:.12g} + {z.imag:.12g}i")
        lines.extend(to_text(g) for g in cr.rational_gens)
    else:
        lines.append("# main component")
        lines.extend(to_text(g) for g in cr.main_gens)
    return "\n".join(lines) + "\n"
