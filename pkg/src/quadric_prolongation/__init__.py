"""Infinitesimal automorphisms of CR quadrics and their Tanaka prolongation.

The package computes, in exact rational arithmetic, the graded Lie algebra of
polynomial vector fields tangent to a quadric ``Im w = H(z, z)`` and compares
it level by level with the Tanaka prolongation of its nonpositive part.
"""

from .exact import GaussianRational, GaussMatrix, RatMatrix, nullspace, rank, realify
from .forms import (
    DegenerateFormError,
    FormError,
    HermitianFormPack,
    NondegeneracyVerdict,
    builtin_catalog,
    check_nondegenerate,
    parse_form_pack,
    serialize_form_pack,
    witness_confirms,
)
from .fields import PolyVectorField, bracket, tangency_check, tangency_residues
from .graded import GradedAlgebraTable, jacobi_check
from .quadric import assemble_table, weight3_nullcheck
from .prolongation import ProlongationState, init_state, prolong_step, run_to_termination
from .theorem import VerificationReport, build_phi, verify_isomorphism, verify_pack

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "GaussMatrix",
    "RatMatrix",
    "nullspace",
    "rank",
    "realify",
    "DegenerateFormError",
    "FormError",
    "HermitianFormPack",
    "NondegeneracyVerdict",
    "builtin_catalog",
    "check_nondegenerate",
    "parse_form_pack",
    "serialize_form_pack",
    "witness_confirms",
    "PolyVectorField",
    "bracket",
    "tangency_check",
    "tangency_residues",
    "GradedAlgebraTable",
    "jacobi_check",
    "assemble_table",
    "weight3_nullcheck",
    "ProlongationState",
    "init_state",
    "prolong_step",
    "run_to_termination",
    "VerificationReport",
    "build_phi",
    "verify_isomorphism",
    "verify_pack",
]
