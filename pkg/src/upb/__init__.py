"""Minimum-size unextendible product bases: bounds, gadgets, builders, verifier."""

from upb.assembler import build_minimal_upb, build_theorem1_upb, build_theorem2_upb
from upb.basis import ProductBasis
from upb.bounds import BoundReport, Rule, SystemSpec, f_m, f_N
from upb.numerics import DEFAULT_TOL, Tolerances
from upb.verifier import Certificate, is_extendible, verify_upb

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Certificate",
    "DEFAULT_TOL",
    "ProductBasis",
    "Rule",
    "SystemSpec",
    "Tolerances",
    "build_minimal_upb",
    "build_theorem1_upb",
    "build_theorem2_upb",
    "f_N",
    "f_m",
    "is_extendible",
    "verify_upb",
]
