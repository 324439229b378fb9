"""Shared assembly of C_phi = C_1 C_2 ... C_n and its certification.

Both surfaces run the same steps, and only the representation builder, the
automorphism formulas and the factor matrices differ. A SurfaceModel bundles
those hooks.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from mcg.word import MappingClassWord
from shear.dynamics import ShearWeights, SurfaceKind
from invariants.roots import RootChoice
from invariants.spectrum import projective_invariants, spectral_distance
from invariants.report import InvariantReport
from utils.errors import InvalidParameter, SingularFactor

SINGULAR_TOL = 1e-10

DEFAULT_THRESHOLDS = {
    "perStep": 1e-10,
    "fullWord": 1e-8,
    "cyclicCheck": 1e-6,
    "maxCondition": 1e12,
}


@dataclass(frozen=True)
class SurfaceModel:
    kind: SurfaceKind
    # (roots, i) -> representation at index i
    representation: Callable[[RootChoice, int], Any]
    generators: Callable[[Any], Tuple[np.ndarray, ...]]
    # (rep, letter) -> images of the generators, with singularity checks
    apply: Callable[[Any, str], Tuple[np.ndarray, ...]]
    # (letter, reference rep, matrices) -> formula evaluated on arbitrary matrices
    automorphism: Callable[[str, Any, Tuple[np.ndarray, ...]], Tuple[np.ndarray, ...]]
    # (letter, roots, i) -> unnormalized C_{i+1}
    factor: Callable[[str, RootChoice, int], np.ndarray]


def index_grid(N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row index i as a column and the offset j - i as a full grid."""
    rows = np.arange(N)[:, None]
    return rows, np.arange(N)[None, :] - rows


def inverse_partial_products(denominators: np.ndarray, name: str) -> np.ndarray:
    """P_i = prod_{a=1}^{i} 1/D_a for i = 0..N-1, with P_0 = 1."""
    denominators = np.asarray(denominators, dtype=complex)
    scale = max(1.0, float(np.abs(denominators).max()))
    if np.any(np.abs(denominators) < SINGULAR_TOL * scale):
        raise SingularFactor(f"A product factor in '{name}' vanishes")
    partial = np.cumprod(1.0 / denominators[:-1])
    return np.concatenate(([1.0 + 0j], partial))


def nonzero(**scalars) -> List[complex]:
    values = []
    for name, value in scalars.items():
        value = complex(value)
        if value == 0:
            raise InvalidParameter(f"Parameter '{name}' must be nonzero")
        values.append(value)
    return values


def conjugation_residual(images: Sequence[np.ndarray], C: np.ndarray, targets: Sequence[np.ndarray]) -> float:
    """max_X |A(X) C - C B(X)| / |A(X) C|."""
    worst = 0.0
    for image, target in zip(images, targets):
        left = image @ C
        scale = max(np.linalg.norm(left), 1e-300)
        worst = max(worst, float(np.linalg.norm(left - C @ target) / scale))
    return worst


def ordered_product(factors: Sequence[np.ndarray]) -> np.ndarray:
    product = factors[0]
    for factor in factors[1:]:
        product = product @ factor
    return product


def word_residual(word: MappingClassWord, model: SurfaceModel, first: Any, last: Any, C: np.ndarray) -> float:
    """Certify the whole word: iterate the automorphism formulas from the first representation."""
    matrices = model.generators(first)
    for letter in word:
        matrices = model.automorphism(letter, first, matrices)
    return conjugation_residual(matrices, C, model.generators(last))


def cyclic_residual(
    word: MappingClassWord,
    model: SurfaceModel,
    reps: Sequence[Any],
    factors: Sequence[np.ndarray],
    eigenvalues: np.ndarray,
) -> float:
    """Certify every rotation of the word on its own.

    For each shift s the rotated product C_{s+1} ... C_n C_1 ... C_s must
    intertwine the composite automorphism of the rotated word starting at
    representation s, and share the projective spectrum of C_phi.
    """
    worst = 0.0
    for shift in range(1, len(factors)):
        rotated = ordered_product(list(factors[shift:]) + list(factors[:shift]))
        rotated = rotated / np.linalg.norm(rotated)
        worst = max(
            worst,
            word_residual(word.rotate(shift), model, reps[shift], reps[shift], rotated),
            spectral_distance(eigenvalues, np.linalg.eigvals(rotated)),
        )
    return worst


def _coerce_word(word: Union[str, MappingClassWord]) -> MappingClassWord:
    return word if isinstance(word, MappingClassWord) else MappingClassWord(str(word))


def assemble(
    word: Union[str, MappingClassWord],
    roots: RootChoice,
    model: SurfaceModel,
    thresholds: Optional[Dict[str, float]] = None,
    weights: Optional[Sequence[ShearWeights]] = None,
    flags: Sequence[str] = (),
) -> InvariantReport:
    word = _coerce_word(word)
    word.require_pseudo_anosov()
    if roots.n != len(word):
        raise InvalidParameter(f"Root choice has {roots.n} steps but the word has {len(word)} letters")
    thresholds = {**DEFAULT_THRESHOLDS, **(thresholds or {})}

    root = roots.root
    reps = [model.representation(roots, i) for i in range(roots.n + 1)]
    relations = max(rep.max_residual() for rep in reps)

    factors = []
    per_step = []
    for i, letter in enumerate(word):
        factor = model.factor(letter, roots, i)
        factor = factor / np.linalg.norm(factor)
        per_step.append(conjugation_residual(model.apply(reps[i], letter), factor, model.generators(reps[i + 1])))
        factors.append(factor)

    C = ordered_product(factors)
    C = C / np.linalg.norm(C)
    spectrum = projective_invariants(C, thresholds["maxCondition"])

    residuals = {
        "relations": relations,
        "perStep": per_step,
        "fullWord": word_residual(word, model, reps[0], reps[-1], C),
        "cyclicCheck": cyclic_residual(word, model, reps, factors, spectrum.eigenvalues),
    }

    if weights is None:
        hN = complex(roots.h) ** root.N
        weights = [ShearWeights(u ** root.N, v ** root.N, hN) for u, v in zip(roots.u, roots.v)]

    report_flags = list(flags)
    if abs(complex(roots.h) - 1) > 1e-12 and "non-geometric" not in report_flags:
        report_flags.append("non-geometric")

    return InvariantReport(
        surface=model.kind.value,
        word=str(word),
        root=root,
        weights=tuple(weights),
        roots=roots,
        C=C,
        spectrum=spectrum,
        residuals=residuals,
        thresholds=thresholds,
        flags=tuple(report_flags),
    )
