"""Strongest algebraic invariants of simple linear loops.

A simple linear loop ``<M, alpha>`` starts at ``alpha`` and repeatedly applies
``x := M x``.  :func:`closure` computes the Zariski closure of its orbit,
:mod:`loopinv.verify` answers invariant questions and :func:`synthesize`
searches for small loops with a prescribed invariant.
"""

from .closure import ClosureResult, closure
from .groebner import ResourceLimitError, buchberger, radical_membership
from .lattice import LatticeBasis, exponent_lattice
from .linalg import Loop, Matrix, jordan_decomposition
from .numbers import AlgebraicNumber, DomainError, NumberField, splitting_field
from .poly import MultiPoly, ParseError, parse_ideal, parse_poly, x_vars
from .synth import SynthResult, SynthSpec, bitsize, is_nontrivial, synthesize
from .verify import (VerifyVerdict, chain_backward, orbit_point_check, verify_inductive, verify_invariant,
                     verify_strongest)

__all__ = [
    "AlgebraicNumber", "ClosureResult", "DomainError", "LatticeBasis", "Loop", "Matrix", "MultiPoly",
    "NumberField", "ParseError", "ResourceLimitError", "SynthResult", "SynthSpec", "VerifyVerdict",
    "bitsize", "buchberger", "chain_backward", "closure", "exponent_lattice", "is_nontrivial",
    "jordan_decomposition", "orbit_point_check", "parse_ideal", "parse_poly", "radical_membership",
    "splitting_field", "synthesize", "verify_inductive", "verify_invariant", "verify_strongest", "x_vars",
]
