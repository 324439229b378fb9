"""Projective spectral data: what survives conjugation and scalar rescaling."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from weyl.roots import principal_root
from utils.errors import IllConditioned

SORT_DIGITS = 9


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray = field(repr=False)
    ratios: np.ndarray
    char_poly: np.ndarray
    condition: float

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "spectrumRatios": [[float(z.real), float(z.imag)] for z in self.ratios],
            "charPoly": [[float(z.real), float(z.imag)] for z in self.char_poly],
            "condition": float(self.condition),
        }


def _sorted_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    """Descending modulus, then ascending argument; moduli compared after rounding."""
    top = np.abs(eigenvalues).max()
    moduli = np.round(np.abs(eigenvalues) / top, SORT_DIGITS)
    arguments = np.round(np.angle(eigenvalues), SORT_DIGITS)
    order = np.lexsort((arguments, -moduli))
    return eigenvalues[order]


def projective_invariants(C: np.ndarray, max_condition: float = 1e12) -> Spectrum:
    """Eigenvalue ratios and the det-normalized characteristic polynomial of C."""
    C = np.asarray(C, dtype=complex)
    condition = float(np.linalg.cond(C))
    if not np.isfinite(condition) or condition > max_condition:
        raise IllConditioned(f"Condition number {condition:.3g} exceeds {max_condition:.3g}")

    eigenvalues = _sorted_eigenvalues(np.linalg.eigvals(C))
    ratios = eigenvalues / eigenvalues[0]
    scale = principal_root(complex(np.prod(eigenvalues)), C.shape[0])
    char_poly = np.poly(eigenvalues / scale)
    return Spectrum(eigenvalues=eigenvalues, ratios=ratios, char_poly=char_poly, condition=condition)


def _multiset_gap(first: np.ndarray, second: np.ndarray) -> float:
    remaining = list(second)
    worst = 0.0
    for value in first:
        gaps = [abs(value - other) / max(1.0, abs(value)) for other in remaining]
        best = int(np.argmin(gaps))
        worst = max(worst, gaps[best])
        remaining.pop(best)
    return worst


def spectral_distance(first: Sequence[complex], second: Sequence[complex]) -> float:
    """Distance between two spectra up to a common scalar.

    Every eigenvalue of the second spectrum is tried as the base, so ties in
    modulus cannot make equivalent spectra look different.
    """
    a = np.asarray(first, dtype=complex)
    b = np.asarray(second, dtype=complex)
    if a.size != b.size:
        return float("inf")
    reference = a / a[0]
    return min(_multiset_gap(reference, b / base) for base in b)


def spectra_agree(first: Spectrum, second: Spectrum, tol: float = 1e-6) -> bool:
    return spectral_distance(first.eigenvalues, second.eigenvalues) <= tol
