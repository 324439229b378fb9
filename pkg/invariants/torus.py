"""Intertwiners C_R, C_L and the invariant C_phi of the 1-puncture torus.

Indices are 0-based and taken mod N. Each factor satisfies

    chi_{u,v,h} o A (X) . C_A = C_A . chi_{u',v',h} (X)

for A in {R, L}, where (u'^N, v'^N) is the shear step of (u^N, v^N).
"""

from typing import Dict, Optional, Sequence, Union

import numpy as np

from mcg.word import MappingClassWord
from shear.dynamics import ShearWeights, SurfaceKind
from weyl.roots import RootOfUnity
from weyl.torus import TorusRep, apply_auto_torus, build_torus_rep, intertwiner_G, torus_automorphism
from invariants.assembly import (
    SurfaceModel,
    assemble,
    conjugation_residual,
    index_grid,
    inverse_partial_products,
    nonzero,
    word_residual,
)
from invariants.report import InvariantReport
from invariants.roots import RootChoice
from utils.errors import InvalidParameter


def matrix_C_R(root: RootOfUnity, u: complex, v: complex, u1: complex, v1: complex, h: complex) -> np.ndarray:
    """(C_R)_ij = q^{2(j-i)^2} (u'v'/(uh))^{j-i} (v'/v)^i prod_{a=1}^{i} 1/((1+q^{4a-3}u)(1+q^{4a-1}u))."""
    u, v, u1, v1, h = nonzero(u=u, v=v, u1=u1, v1=v1, h=h)
    rows, offset = index_grid(root.N)
    a = np.arange(1, root.N + 1)
    products = inverse_partial_products((1 + root.power(4 * a - 3) * u) * (1 + root.power(4 * a - 1) * u), "C_R")
    return (
        root.power(2 * offset * offset)
        * (u1 * v1 / (u * h)) ** offset
        * (v1 / v) ** rows
        * products[rows]
    )


def matrix_C_tilde_L(root: RootOfUnity, u: complex, v: complex, u2: complex, v2: complex, h: complex) -> np.ndarray:
    u, v, u2, v2, h = nonzero(u=u, v=v, u2=u2, v2=v2, h=h)
    rows, offset = index_grid(root.N)
    a = np.arange(1, root.N + 1)
    products = inverse_partial_products((1 + root.power(4 * a - 3) * v) * (1 + root.power(4 * a - 1) * v), "C_L")
    return (
        root.power(2 * offset * offset + 2 * rows * rows)
        * (u2 * v2 / (v * h)) ** offset
        * (u * v * v2 / h) ** rows
        * products[rows]
    )


def matrix_C_L(root: RootOfUnity, u: complex, v: complex, u2: complex, v2: complex, h: complex) -> np.ndarray:
    """C_L = G . C~_L with G_ij = q^{4ij}."""
    return intertwiner_G(root) @ matrix_C_tilde_L(root, u, v, u2, v2, h)


def matrix_for_letter(letter: str, root: RootOfUnity, u, v, u1, v1, h) -> np.ndarray:
    if letter == "R":
        return matrix_C_R(root, u, v, u1, v1, h)
    if letter == "L":
        return matrix_C_L(root, u, v, u1, v1, h)
    raise InvalidParameter(f"Unknown letter '{letter}'")


def verify_conjugation(rep: TorusRep, letter: str, C: np.ndarray, rep_next: TorusRep) -> float:
    """Relative residual of chi o A (X) C = C chi'(X) over X in {U, V, W}."""
    return conjugation_residual(apply_auto_torus(rep, letter), C, rep_next.generators)


def _representation(roots: RootChoice, i: int) -> TorusRep:
    return build_torus_rep(roots.root, roots.u[i], roots.v[i], roots.h)


def _factor(letter: str, roots: RootChoice, i: int) -> np.ndarray:
    return matrix_for_letter(letter, roots.root, roots.u[i], roots.v[i], roots.u[i + 1], roots.v[i + 1], roots.h)


TORUS_MODEL = SurfaceModel(
    kind=SurfaceKind.TORUS,
    representation=_representation,
    generators=lambda rep: rep.generators,
    apply=apply_auto_torus,
    automorphism=lambda letter, rep, matrices: torus_automorphism(letter, rep.root.q, *matrices),
    factor=_factor,
)


def verify_word(word: Union[str, MappingClassWord], roots: RootChoice, C: np.ndarray) -> float:
    """Full-word residual of chi_0 o A_1 ... A_n (X) C = C chi_n(X)."""
    word = word if isinstance(word, MappingClassWord) else MappingClassWord(str(word))
    return word_residual(word, TORUS_MODEL, _representation(roots, 0), _representation(roots, roots.n), C)


def assemble_invariant(
    word: Union[str, MappingClassWord],
    root: RootOfUnity,
    roots: RootChoice,
    thresholds: Optional[Dict[str, float]] = None,
    weights: Optional[Sequence[ShearWeights]] = None,
    flags: Sequence[str] = (),
) -> InvariantReport:
    """C_phi = C_1 ... C_n with C_i = C_R or C_L of (u_{i-1}, v_{i-1}, u_i, v_i, h)."""
    if roots.root != root:
        raise InvalidParameter(f"Root choice was made for {roots.root}, not {root}")
    return assemble(word, roots, TORUS_MODEL, thresholds=thresholds, weights=weights, flags=flags)
