"""Finite-dimensional representations of the Chekhov-Fock algebras at odd roots of unity."""

from .roots import RootOfUnity, principal_root, nth_root
from .torus import (
    TorusRep,
    build_torus_rep,
    build_mu_rep,
    intertwiner_G,
    torus_automorphism,
    apply_auto_torus,
)
from .sphere import (
    Centrals,
    SphereRep,
    build_sphere_rep,
    build_sphere_mu_rep,
    sphere_automorphism,
    apply_auto_sphere,
    sphere_shadow,
    infer_commutation_table,
)

__all__ = [
    "RootOfUnity",
    "principal_root",
    "nth_root",
    "TorusRep",
    "build_torus_rep",
    "build_mu_rep",
    "intertwiner_G",
    "torus_automorphism",
    "apply_auto_torus",
    "Centrals",
    "SphereRep",
    "build_sphere_rep",
    "build_sphere_mu_rep",
    "sphere_automorphism",
    "apply_auto_sphere",
    "sphere_shadow",
    "infer_commutation_table",
]
