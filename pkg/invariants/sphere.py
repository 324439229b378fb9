"""Intertwiners C*_R, C*_L and the invariant C*_phi of the 4-puncture sphere."""

from typing import Dict, Optional, Sequence, Union

import numpy as np

from mcg.word import MappingClassWord
from shear.dynamics import ShearWeights, SurfaceKind
from weyl.roots import RootOfUnity
from weyl.sphere import SphereRep, apply_auto_sphere, build_sphere_rep, sphere_automorphism
from weyl.torus import intertwiner_G
from invariants.assembly import (
    SurfaceModel,
    assemble,
    conjugation_residual,
    index_grid,
    inverse_partial_products,
    nonzero,
)
from invariants.report import InvariantReport
from invariants.roots import SphereRootChoice
from utils.errors import InvalidParameter


def matrix_Cstar_R(root: RootOfUnity, u: complex, v: complex, u1: complex, v1: complex,
                   h: complex = 1.0, p2: complex = 1.0, p3: complex = 1.0) -> np.ndarray:
    """(C*_R)_ij = q^{(j-i)^2} (u'v'/(p2 u))^{j-i} (v'/v)^i prod_{a=1}^{i} 1/((1+q^{2a-1}u)(1+q^{2a-1} alpha u)).

    alpha = p2 p3 / h.
    """
    u, v, u1, v1, h, p2, p3 = nonzero(u=u, v=v, u1=u1, v1=v1, h=h, p2=p2, p3=p3)
    alpha = p2 * p3 / h
    rows, offset = index_grid(root.N)
    odd = root.power(2 * np.arange(1, root.N + 1) - 1)
    products = inverse_partial_products((1 + odd * u) * (1 + odd * alpha * u), "C*_R")
    return (
        root.power(offset * offset)
        * (u1 * v1 / (p2 * u)) ** offset
        * (v1 / v) ** rows
        * products[rows]
    )


def matrix_Cstar_tilde_L(root: RootOfUnity, u: complex, v: complex, u1: complex, v1: complex,
                         h: complex = 1.0, p1: complex = 1.0, p3: complex = 1.0, p4: complex = 1.0) -> np.ndarray:
    u, v, u1, v1, h, p1, p3, p4 = nonzero(u=u, v=v, u1=u1, v1=v1, h=h, p1=p1, p3=p3, p4=p4)
    p2 = h * h / (p1 * p3 * p4)
    beta = h / (p1 * p2)
    rows, offset = index_grid(root.N)
    odd = root.power(2 * np.arange(1, root.N + 1) - 1)
    products = inverse_partial_products((1 + odd * v) * (1 + odd * beta * v), "C*_L")
    return (
        root.power(offset * offset + rows * rows)
        * (p2 * u1 * v1 / (h * v)) ** offset
        * (u * v * v1 / p1) ** rows
        * products[rows]
    )


def matrix_Cstar_L(root: RootOfUnity, u: complex, v: complex, u1: complex, v1: complex,
                   h: complex = 1.0, p1: complex = 1.0, p3: complex = 1.0, p4: complex = 1.0) -> np.ndarray:
    """C*_L = G* . C~*_L with G*_ij = q^{2ij}; p2 is fixed by h^2 = p1 p2 p3 p4."""
    return intertwiner_G(root, step=2) @ matrix_Cstar_tilde_L(root, u, v, u1, v1, h, p1, p3, p4)


def verify_sphere_conjugation(rep: SphereRep, letter: str, C: np.ndarray, rep_next: SphereRep) -> float:
    return conjugation_residual(apply_auto_sphere(rep, letter), C, rep_next.X)


def _representation(roots: SphereRootChoice, i: int) -> SphereRep:
    return build_sphere_rep(roots.root, roots.u[i], roots.v[i], *roots.centrals)


def _factor(letter: str, roots: SphereRootChoice, i: int) -> np.ndarray:
    h, p1, p2, p3, p4 = roots.centrals
    u, v, u1, v1 = roots.u[i], roots.v[i], roots.u[i + 1], roots.v[i + 1]
    if letter == "R":
        return matrix_Cstar_R(roots.root, u, v, u1, v1, h, p2, p3)
    if letter == "L":
        return matrix_Cstar_L(roots.root, u, v, u1, v1, h, p1, p3, p4)
    raise InvalidParameter(f"Unknown letter '{letter}'")


SPHERE_MODEL = SurfaceModel(
    kind=SurfaceKind.SPHERE,
    representation=_representation,
    generators=lambda rep: rep.X,
    apply=apply_auto_sphere,
    automorphism=lambda letter, rep, matrices: sphere_automorphism(letter, rep.root.q, rep.constants, matrices),
    factor=_factor,
)


def assemble_sphere_invariant(
    word: Union[str, MappingClassWord],
    root: RootOfUnity,
    roots: SphereRootChoice,
    thresholds: Optional[Dict[str, float]] = None,
    weights: Optional[Sequence[ShearWeights]] = None,
    flags: Sequence[str] = (),
) -> InvariantReport:
    if not isinstance(roots, SphereRootChoice):
        raise InvalidParameter("Sphere invariants need a SphereRootChoice carrying p1..p4")
    if roots.root != root:
        raise InvalidParameter(f"Root choice was made for {roots.root}, not {root}")
    return assemble(word, roots, SPHERE_MODEL, thresholds=thresholds, weights=weights, flags=flags)
