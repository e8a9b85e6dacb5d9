"""Command-line front end.

Exit codes: 0 success or "yes", 1 "no", 2 parse error, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .closure import closure
from .groebner import ResourceLimitError
from .io import closure_document, closure_text, dump_loop, parse_loop, read_ideal
from .lattice import DEFAULT_CAP, exponent_lattice
from .numbers import DomainError, splitting_field, upoly
from .poly import ParseError, parse_poly
from .synth import SynthSpec, synthesize
from .verify import DEFAULT_MAX_ITER, chain_backward, verify_inductive, verify_invariant, verify_strongest

EXIT_YES, EXIT_NO, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(text)


def cmd_closure(args) -> int:
    loop = parse_loop(_read(args.loop))
    cr = closure(loop, rationalize=args.rationalize, lattice_cap=args.lattice_cap)
    _emit(args, closure_document(cr, args.rationalize), closure_text(cr, args.rationalize))
    return EXIT_YES


def cmd_verify(args) -> int:
    loop = parse_loop(_read(args.loop))
    S = read_ideal(_read(args.ideal), loop.dim)
    if args.mode == "inductive":
        v = verify_inductive(S, loop)
    elif args.mode == "invariant":
        v = verify_invariant(S, loop, lattice_cap=args.lattice_cap)
    elif args.mode == "strongest":
        v = verify_strongest(S, loop, lattice_cap=args.lattice_cap)
    else:
        v = chain_backward(S, loop, args.max_iter)
    doc = {"kind": "verify", "mode": v.mode, "answer": v.answer,
           "witness": None if v.witness is None else str(v.witness), "caveat": v.caveat}
    if v.index is not None:
        doc["stabilization_index"] = v.index
    text = f"{v.mode}: {'yes' if v.answer else 'no'}\n"
    if v.witness is not None:
        text += f"witness: {v.witness}\n"
    if v.caveat:
        text += f"caveat: {v.caveat}\n"
    if v.index is not None:
        text += f"stabilization index: {v.index}\n"
    _emit(args, doc, text)
    return EXIT_YES if v.answer else EXIT_NO


def cmd_synth(args) -> int:
    S = read_ideal(_read(args.ideal), args.dim)
    spec = SynthSpec(S, args.bits, args.dim, args.domain, args.mode, args.strategy, args.lattice_cap)
    res = synthesize(spec)
    doc = {"kind": "synth", "found": res.found, "mode": args.mode, "bits": args.bits, "dim": args.dim,
           "domain": args.domain, "candidates": res.candidates, "note": res.note,
           "loop": json.loads(dump_loop(res.loop)) if res.loop else None,
           "caveat": res.certificate.caveat if res.certificate else None}
    if res.found:
        text = f"found after {res.candidates} candidates\n{dump_loop(res.loop)}\n"
        if res.certificate and res.certificate.caveat:
            text += f"caveat: {res.certificate.caveat}\n"
    else:
        text = f"no {args.bits}-bit witness exists ({res.candidates} candidates examined; {res.note})\n"
    _emit(args, doc, text)
    return EXIT_YES if res.found else EXIT_NO


def _parse_value(spec: str):
    """``poly@re,im`` with ``poly`` in ``x``: the root of ``poly`` closest to ``re + im*i``."""
    poly_text, _, where = spec.partition("@")
    p = parse_poly(poly_text, ("x",))
    if p.is_zero() or p.total_degree() < 1:
        raise ParseError(f"{poly_text!r} must be a nonconstant polynomial in x")
    coeffs = [0] * (p.total_degree() + 1)
    for m, c in p.terms.items():
        coeffs[m[0]] = c
    if where:
        try:
            re_s, _, im_s = where.partition(",")
            target = complex(float(re_s), float(im_s or 0))
        except ValueError as exc:
            raise ParseError(f"malformed root selector {where!r}") from exc
    else:
        target = 0j
    return upoly(coeffs), target


def cmd_lattice(args) -> int:
    specs = [_parse_value(v) for v in args.values]
    sf = splitting_field([p for p, _ in specs])
    values = []
    for p, target in specs:
        roots = [r for f in sf.factors if (p % f).is_zero() for r in sf.roots_of(f)]
        values.append(min(roots, key=lambda r: abs(r.approx_complex() - target)))
    if any(v.is_zero() for v in values):
        raise DomainError("exponent lattice values must be nonzero")
    lat = exponent_lattice(values, args.cap)
    doc = {"kind": "lattice", "basis": [list(v) for v in lat.vectors], "completeness": lat.completeness,
           "cap": lat.cap, "values": [[v.approx_complex().real, v.approx_complex().imag] for v in values]}
    text = f"# completeness: {lat.completeness} (cap {lat.cap})\n"
    text += "".join(" ".join(str(x) for x in v) + "\n" for v in lat.vectors)
    _emit(args, doc, text)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loopinv", description="Strongest algebraic invariants of simple linear loops")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--lattice-cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("closure", help="compute the orbit closure")
    p.add_argument("loop")
    p.add_argument("--rationalize", action="store_true", help="emit rational generators with y variables")
    common(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("verify", help="check a candidate invariant")
    p.add_argument("loop")
    p.add_argument("ideal")
    p.add_argument("--mode", choices=("invariant", "inductive", "strongest", "chain"), default="invariant")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="bit-bounded loop synthesis")
    p.add_argument("ideal")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--domain", choices=("integers", "rationals"), default="integers")
    p.add_argument("--mode", choices=("weak", "strong"), default="weak")
    p.add_argument("--strategy", choices=("template", "exhaustive"), default="template")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("lattice", help="exponent lattice of algebraic numbers given as poly@re,im")
    p.add_argument("values", nargs="+")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_lattice)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (ParseError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main_entry() -> None:
    sys.exit(main())
