"""Standard representations of the torus triangle algebra W_q.

Generators U, V, W with VU = q^4 UV, WV = q^4 VW, UW = q^4 WU and central
element H = q^2 UVW. Matrices are indexed 0..N-1.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from weyl.roots import RootOfUnity
from utils.errors import InvalidParameter, SingularFactor

Triple = Tuple[np.ndarray, np.ndarray, np.ndarray]

SINGULAR_TOL = 1e-10


def clock(root: RootOfUnity, step: int) -> np.ndarray:
    """diag(q^{step * i})."""
    return np.diag(root.power(step * np.arange(root.N)))


def shift(N: int) -> np.ndarray:
    """Cyclic shift with ones at (i, i+1 mod N)."""
    return np.roll(np.eye(N, dtype=complex), 1, axis=1)


def relative_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs), 1e-300)
    return float(np.linalg.norm(lhs - rhs) / scale)


def _check_nonzero(**scalars) -> None:
    for name, value in scalars.items():
        if value == 0:
            raise InvalidParameter(f"Parameter '{name}' must be nonzero")


@dataclass(frozen=True, eq=False)
class TorusRep:
    root: RootOfUnity
    u: complex
    v: complex
    h: complex
    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    W: np.ndarray = field(repr=False)

    @property
    def generators(self) -> Triple:
        return self.U, self.V, self.W

    def residuals(self) -> Dict[str, float]:
        """Relative residuals of the algebra relations and power/central values."""
        q = self.root.q
        U, V, W = self.generators
        identity = np.eye(self.root.N)
        N = self.root.N
        return {
            "VU": relative_residual(V @ U, q ** 4 * U @ V),
            "WV": relative_residual(W @ V, q ** 4 * V @ W),
            "UW": relative_residual(U @ W, q ** 4 * W @ U),
            "U^N": relative_residual(np.linalg.matrix_power(U, N), self.u ** N * identity),
            "V^N": relative_residual(np.linalg.matrix_power(V, N), self.v ** N * identity),
            "H": relative_residual(q ** 2 * U @ V @ W, self.h * identity),
        }

    def max_residual(self) -> float:
        return max(self.residuals().values())


def build_torus_rep(root: RootOfUnity, u: complex, v: complex, h: complex) -> TorusRep:
    """The standard representation chi_{u,v,h}."""
    u, v, h = complex(u), complex(v), complex(h)
    _check_nonzero(u=u, v=v, h=h)
    N = root.N
    q = root.q
    inverse_shift = np.zeros((N, N), dtype=complex)
    rows = np.arange(N)
    inverse_shift[rows, (rows - 1) % N] = root.power(-4 * (rows - 1))
    return TorusRep(
        root=root, u=u, v=v, h=h,
        U=u * clock(root, 4),
        V=v * shift(N),
        W=(q ** -2 * h / (u * v)) * inverse_shift,
    )


def build_mu_rep(root: RootOfUnity, u: complex, v: complex, h: complex) -> TorusRep:
    """The companion representation mu_{u,v,h} with U cyclic and V diagonal.

    G mu(X) G^-1 = chi(X) with G = intertwiner_G(root).
    """
    u, v, h = complex(u), complex(v), complex(h)
    _check_nonzero(u=u, v=v, h=h)
    N = root.N
    q = root.q
    rows = np.arange(N)
    twisted_shift = np.zeros((N, N), dtype=complex)
    twisted_shift[rows, (rows + 1) % N] = root.power(-4 * rows)
    return TorusRep(
        root=root, u=u, v=v, h=h,
        U=u * shift(N).T,
        V=v * clock(root, 4),
        W=(q ** -2 * h / (u * v)) * twisted_shift,
    )


def intertwiner_G(root: RootOfUnity, step: int = 4) -> np.ndarray:
    """G_ij = q^{step * i * j}."""
    index = np.arange(root.N)
    return root.power(step * np.outer(index, index))


def _factor_inverse(M: np.ndarray, coefficient: complex, power: int) -> np.ndarray:
    """(1 + coefficient * M^power)^-1."""
    identity = np.eye(M.shape[0])
    base = M if power == 1 else np.linalg.inv(M)
    try:
        return np.linalg.inv(identity + coefficient * base)
    except np.linalg.LinAlgError as e:
        raise SingularFactor(f"Factor 1 + {coefficient:.3g} X^{power} is singular") from e


def torus_automorphism(letter: str, q: complex, U: np.ndarray, V: np.ndarray, W: np.ndarray) -> Triple:
    """Evaluate R or L on any matrix triple satisfying the W_q relations.

    R(U) = (1+qU^-1)^-1 (1+q^3 U^-1)^-1 W, R(V) = (1+qU)(1+q^3 U) V, R(W) = U^-1
    L(U) = (1+qV^-1)^-1 (1+q^3 V^-1)^-1 U, L(V) = (1+qV)(1+q^3 V) W, L(W) = V^-1
    """
    identity = np.eye(U.shape[0])
    if letter == "R":
        image_U = _factor_inverse(U, q, -1) @ _factor_inverse(U, q ** 3, -1) @ W
        image_V = (identity + q * U) @ (identity + q ** 3 * U) @ V
        image_W = np.linalg.inv(U)
    elif letter == "L":
        image_U = _factor_inverse(V, q, -1) @ _factor_inverse(V, q ** 3, -1) @ U
        image_V = (identity + q * V) @ (identity + q ** 3 * V) @ W
        image_W = np.linalg.inv(V)
    else:
        raise InvalidParameter(f"Unknown letter '{letter}'")
    return image_U, image_V, image_W


def apply_auto_torus(rep: TorusRep, letter: str) -> Triple:
    """chi o R or chi o L as a matrix triple."""
    N = rep.root.N
    weight = rep.u if letter == "R" else rep.v
    if abs(1 + weight ** N) < SINGULAR_TOL:
        name = "u" if letter == "R" else "v"
        raise SingularFactor(f"{name}^N = {weight ** N:.6g} is -1; the factors of {letter} are singular")
    return torus_automorphism(letter, rep.root.q, *rep.generators)
