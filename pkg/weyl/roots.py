"""Primitive odd roots of unity and N-th root selection."""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from utils.errors import InvalidParameter

ArrayLike = Union[int, np.ndarray]

# Values this close to the negative real axis take argument +pi
AXIS_SNAP = 1e-12


@dataclass(frozen=True)
class RootOfUnity:
    """q = exp(2 pi i k / N) with N odd and gcd(k, N) = 1."""

    N: int
    k: int = 1

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1 or self.N % 2 == 0:
            raise InvalidParameter(f"N must be an odd positive integer, got {self.N!r}")
        if not isinstance(self.k, int) or math.gcd(self.k, self.N) != 1:
            raise InvalidParameter(f"k = {self.k!r} is not coprime to N = {self.N}")

    @property
    def q(self) -> complex:
        return complex(self.power(1))

    def power(self, exponent: ArrayLike):
        """q**exponent with the exponent reduced mod N first, so integer powers stay exact."""
        reduced = np.mod(np.asarray(exponent) * self.k, self.N)
        return np.exp(2j * np.pi * reduced / self.N)

    def to_dict(self) -> dict:
        return {"N": self.N, "k": self.k}


def principal_root(x: complex, N: int) -> complex:
    """Principal N-th root, with the negative real axis mapped to argument pi."""
    x = complex(x)
    if x == 0:
        raise InvalidParameter("Cannot take an N-th root of zero")
    modulus = abs(x)
    if x.real < 0 and abs(x.imag) <= AXIS_SNAP * modulus:
        angle = math.pi
    else:
        angle = math.atan2(x.imag, x.real)
    return modulus ** (1.0 / N) * complex(math.cos(angle / N), math.sin(angle / N))


def nth_root(x: complex, root: RootOfUnity, selector: int = 0, step: int = 4) -> complex:
    """Principal N-th root of x times q**(step * selector).

    gcd(step, N) = 1 for odd N, so selectors 0..N-1 enumerate all N roots.
    """
    return principal_root(x, root.N) * complex(root.power(step * selector))
