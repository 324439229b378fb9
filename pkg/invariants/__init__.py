"""Assembly and certification of the invariants C_phi."""

from .roots import RootChoice, SphereRootChoice, choose_roots, choose_sphere_roots
from .spectrum import Spectrum, projective_invariants, spectral_distance, spectra_agree
from .report import InvariantReport, SCHEMA
from .assembly import DEFAULT_THRESHOLDS, conjugation_residual
from .torus import (
    matrix_C_R,
    matrix_C_L,
    matrix_C_tilde_L,
    verify_conjugation,
    verify_word,
    assemble_invariant,
)
from .sphere import (
    matrix_Cstar_R,
    matrix_Cstar_L,
    matrix_Cstar_tilde_L,
    verify_sphere_conjugation,
    assemble_sphere_invariant,
)

__all__ = [
    "RootChoice",
    "SphereRootChoice",
    "choose_roots",
    "choose_sphere_roots",
    "Spectrum",
    "projective_invariants",
    "spectral_distance",
    "spectra_agree",
    "InvariantReport",
    "SCHEMA",
    "DEFAULT_THRESHOLDS",
    "conjugation_residual",
    "matrix_C_R",
    "matrix_C_L",
    "matrix_C_tilde_L",
    "verify_conjugation",
    "verify_word",
    "assemble_invariant",
    "matrix_Cstar_R",
    "matrix_Cstar_L",
    "matrix_Cstar_tilde_L",
    "verify_sphere_conjugation",
    "assemble_sphere_invariant",
]
