"""Exact arithmetic for Z^n-graded Loday and Lod-infinity algebras."""
from .grading import Degree, GradedSpace, InputError, LodayError, Vector, e1
from .multilinear import MapSequence, MultiMap, bracket, sequence_bracket, stem_bracket
from .coalgebra import Coderivation, Cohomomorphism, coproduct, phi, phi_inverse
from .structures import (
    CheckFailed,
    Morphism,
    check_lod_infinity,
    check_loday,
    check_morphism,
    compose,
    conjugate,
    invert_morphism,
)
from .cohomology import loday_cohomology, loday_coboundary
from .deformation import FormalDeformation, deformation_check, gauge_action, obstruction_class, straighten
from .homotopy import minimal_model, quasi_inverse
from .jacobi import AlphaAntisymOp, GradedAlgebra, check_jacobi_structure, gm_bracket, pullback_stem

__version__ = "0.1.0"

__all__ = [
    "AlphaAntisymOp", "CheckFailed", "Coderivation", "Cohomomorphism", "Degree", "FormalDeformation",
    "GradedAlgebra", "GradedSpace", "InputError", "LodayError", "MapSequence", "Morphism", "MultiMap",
    "Vector", "bracket", "check_jacobi_structure", "check_lod_infinity", "check_loday", "check_morphism",
    "compose", "conjugate", "coproduct", "deformation_check", "e1", "gauge_action", "gm_bracket",
    "invert_morphism", "loday_coboundary", "loday_cohomology", "minimal_model", "obstruction_class", "phi",
    "phi_inverse", "pullback_stem", "quasi_inverse", "sequence_bracket", "stem_bracket", "straighten",
]
