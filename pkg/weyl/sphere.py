"""Standard representations of the 4-puncture sphere algebra.

X1 is the clock u*diag(q^{2i}) and X2 the shift v*S, so X2 X1 = q^2 X1 X2.
Fixing the central values P1..P4 and H forces the remaining generators to be
monomials in X1, X2:

    X3 = alpha X1,  X4 = beta X2,  X5 = gamma X2^-1 X1^-1,  X6 = delta X2^-1 X1^-1

with alpha = p2 p3 / h, beta = h / (p1 p2), gamma = p1 / q, delta = h / (q p3),
and the admissibility constraint h^2 = p1 p2 p3 p4.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Tuple

import numpy as np

from weyl.roots import RootOfUnity
from weyl.torus import clock, relative_residual, shift
from utils.errors import InconsistentCentrals, InvalidParameter, SingularFactor

Sextuple = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]

CENTRAL_TOL = 1e-9
SINGULAR_TOL = 1e-10


class SphereConstants(NamedTuple):
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex


class Centrals(NamedTuple):
    h: complex
    p1: complex
    p2: complex
    p3: complex
    p4: complex


def sphere_constants(q: complex, centrals: Centrals) -> SphereConstants:
    h, p1, p2, p3, _ = centrals
    return SphereConstants(p2 * p3 / h, h / (p1 * p2), p1 / q, h / (q * p3))


def central_residuals(q: complex, X: Sextuple, centrals: Centrals) -> Dict[str, float]:
    X1, X2, X3, X4, X5, X6 = X
    identity = np.eye(X1.shape[0])
    h, p1, p2, p3, p4 = centrals
    return {
        "P1": relative_residual(q * X1 @ X2 @ X5, p1 * identity),
        "P2": relative_residual(X2 @ X3 @ X6 / q, p2 * identity),
        "P3": relative_residual(q * X3 @ X4 @ X5, p3 * identity),
        "P4": relative_residual(q * X1 @ X4 @ X6, p4 * identity),
        "H": relative_residual(q ** 2 * X1 @ X2 @ X3 @ X4 @ X5 @ X6, h * identity),
    }


def _complete(X1: np.ndarray, X2: np.ndarray, constants: SphereConstants) -> Sextuple:
    alpha, beta, gamma, delta = constants
    inverse_product = np.linalg.inv(X2) @ np.linalg.inv(X1)
    return X1, X2, alpha * X1, beta * X2, gamma * inverse_product, delta * inverse_product


@dataclass(frozen=True, eq=False)
class SphereRep:
    root: RootOfUnity
    u: complex
    v: complex
    centrals: Centrals
    X: Sextuple = field(repr=False)

    @property
    def h(self) -> complex:
        return self.centrals.h

    @property
    def constants(self) -> SphereConstants:
        return sphere_constants(self.root.q, self.centrals)

    def residuals(self) -> Dict[str, float]:
        q = self.root.q
        N = self.root.N
        X1, X2 = self.X[0], self.X[1]
        identity = np.eye(N)
        result = {
            "X2X1": relative_residual(X2 @ X1, q ** 2 * X1 @ X2),
            "X1^N": relative_residual(np.linalg.matrix_power(X1, N), self.u ** N * identity),
            "X2^N": relative_residual(np.linalg.matrix_power(X2, N), self.v ** N * identity),
        }
        result.update(central_residuals(q, self.X, self.centrals))
        return result

    def max_residual(self) -> float:
        return max(self.residuals().values())


def _make_centrals(h, p1, p2, p3, p4) -> Centrals:
    centrals = Centrals(*(complex(value) for value in (h, p1, p2, p3, p4)))
    for name, value in zip(Centrals._fields, centrals):
        if value == 0:
            raise InvalidParameter(f"Central value '{name}' must be nonzero")
    return centrals


def _verify(q: complex, X: Sextuple, centrals: Centrals) -> None:
    residuals = central_residuals(q, X, centrals)
    worst = max(residuals, key=residuals.get)
    if residuals[worst] > CENTRAL_TOL:
        h, p1, p2, p3, p4 = centrals
        raise InconsistentCentrals(
            f"Central element {worst} off by {residuals[worst]:.3g}; "
            f"h^2 = {h * h:.6g} but p1 p2 p3 p4 = {p1 * p2 * p3 * p4:.6g}"
        )


def build_sphere_rep(root: RootOfUnity, u: complex, v: complex, h: complex,
                     p1: complex, p2: complex, p3: complex, p4: complex) -> SphereRep:
    """The standard representation chi_{u,v,h,p}."""
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        raise InvalidParameter("u and v must be nonzero")
    centrals = _make_centrals(h, p1, p2, p3, p4)
    q = root.q
    X = _complete(u * clock(root, 2), v * shift(root.N), sphere_constants(q, centrals))
    _verify(q, X, centrals)
    return SphereRep(root=root, u=u, v=v, centrals=centrals, X=X)


def build_sphere_mu_rep(root: RootOfUnity, u: complex, v: complex, h: complex,
                        p1: complex, p2: complex, p3: complex, p4: complex) -> SphereRep:
    """Companion representation with X1 cyclic and X2 diagonal; G* mu G*^-1 = chi."""
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        raise InvalidParameter("u and v must be nonzero")
    centrals = _make_centrals(h, p1, p2, p3, p4)
    q = root.q
    X = _complete(u * shift(root.N).T, v * clock(root, 2), sphere_constants(q, centrals))
    _verify(q, X, centrals)
    return SphereRep(root=root, u=u, v=v, centrals=centrals, X=X)


def _factor_inverse(M: np.ndarray, coefficient: complex) -> np.ndarray:
    """(1 + coefficient * M^-1)^-1."""
    try:
        return np.linalg.inv(np.eye(M.shape[0]) + coefficient * np.linalg.inv(M))
    except np.linalg.LinAlgError as e:
        raise SingularFactor(f"Factor 1 + {coefficient:.3g} X^-1 is singular") from e


def sphere_automorphism(letter: str, q: complex, constants: SphereConstants, X: Sextuple) -> Sextuple:
    """Evaluate R or L on a sextuple satisfying the monomial relations above.

    R(X1) = (1+qX1^-1)^-1 (1+qX3^-1)^-1 X6,  R(X2) = (1+qX1)(1+qX3) X2
    L(X1) = (1+qX2^-1)^-1 (1+qX4^-1)^-1 X1,  L(X2) = (1+qX2)(1+qX4) X5
    The images of X3..X6 follow from the fixed central elements.
    """
    X1, X2, X3, X4, X5, X6 = X
    identity = np.eye(X1.shape[0])
    if letter == "R":
        image_1 = _factor_inverse(X1, q) @ _factor_inverse(X3, q) @ X6
        image_2 = (identity + q * X1) @ (identity + q * X3) @ X2
    elif letter == "L":
        image_1 = _factor_inverse(X2, q) @ _factor_inverse(X4, q) @ X1
        image_2 = (identity + q * X2) @ (identity + q * X4) @ X5
    else:
        raise InvalidParameter(f"Unknown letter '{letter}'")
    return _complete(image_1, image_2, constants)


def apply_auto_sphere(rep: SphereRep, letter: str) -> Sextuple:
    """chi o R or chi o L on all six generators, with centrals re-verified."""
    N = rep.root.N
    constants = rep.constants
    if letter == "R":
        weights = {"u": rep.u, "alpha*u": constants.alpha * rep.u}
    else:
        weights = {"v": rep.v, "beta*v": constants.beta * rep.v}
    for name, weight in weights.items():
        if abs(1 + weight ** N) < SINGULAR_TOL:
            raise SingularFactor(f"({name})^N = -1; the factors of {letter} are singular")

    images = sphere_automorphism(letter, rep.root.q, constants, rep.X)
    _verify(rep.root.q, images, rep.centrals)
    return images


def sphere_shadow(x1: complex, x2: complex, letter: str, N: int, centrals: Centrals) -> Tuple[complex, complex]:
    """N-th powers of the central data after R or L, for arbitrary central values."""
    h, p1, p2, p3, _ = centrals
    a = (p2 * p3 / h) ** N
    b = (h / (p1 * p2)) ** N
    if letter == "R":
        factor = (1 + x1) * (1 + a * x1)
        return p2 ** N * x1 / (x2 * factor), factor * x2
    factor = (1 + x2) * (1 + b * x2)
    return b * x1 * x2 * x2 / factor, p1 ** N * factor / (x1 * x2)


def infer_commutation_table(rep: SphereRep) -> np.ndarray:
    """Exponents e_ij (centered mod N) with X_i X_j = q^{e_ij} X_j X_i."""
    N, k = rep.root.N, rep.root.k
    k_inverse = pow(k, -1, N) if N > 1 else 0
    table = np.zeros((6, 6), dtype=int)
    for i in range(6):
        for j in range(6):
            forward = rep.X[i] @ rep.X[j]
            backward = rep.X[j] @ rep.X[i]
            ratio = np.vdot(backward, forward) / np.vdot(backward, backward)
            turns = int(round(np.angle(ratio) * N / (2 * math.pi))) % N if N > 1 else 0
            exponent = (turns * k_inverse) % N if N > 1 else 0
            if exponent > N // 2:
                exponent -= N
            table[i, j] = exponent
    return table
