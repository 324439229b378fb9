"""N-th root choices along a periodic shear trajectory."""

import dataclasses
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from shear.dynamics import ShearWeights, closing_residual
from weyl.roots import RootOfUnity, nth_root
from weyl.sphere import Centrals
from utils.errors import InvalidParameter, NonPeriodicTrajectory

PERIODICITY_TOL = 1e-10

Selector = Tuple[int, int]


def _pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class RootChoice:
    """Roots u_i, v_i for i = 0..n with u_n = u_0 and v_n = v_0."""

    root: RootOfUnity
    u: Tuple[complex, ...]
    v: Tuple[complex, ...]
    h: complex = 1.0
    selectors: Tuple[Selector, ...] = ()

    def __post_init__(self):
        if len(self.u) != len(self.v) or len(self.u) < 2:
            raise InvalidParameter("Root lists must have equal length n + 1 >= 2")
        if self.u[-1] != self.u[0] or self.v[-1] != self.v[0]:
            raise NonPeriodicTrajectory("Root choice is not closed: u_n != u_0 or v_n != v_0")

    @property
    def n(self) -> int:
        return len(self.u) - 1

    def rotate(self, shift: int) -> "RootChoice":
        """Root choice of the rotated word A_{s+1} ... A_n A_1 ... A_s."""
        shift %= self.n
        u = list(self.u[:-1])
        v = list(self.v[:-1])
        u = u[shift:] + u[:shift]
        v = v[shift:] + v[:shift]
        selectors = list(self.selectors)
        if selectors:
            selectors = selectors[shift:] + selectors[:shift]
        return dataclasses.replace(
            self, u=tuple(u + u[:1]), v=tuple(v + v[:1]), selectors=tuple(selectors)
        )

    def to_dict(self) -> dict:
        return {
            "u": [_pair(z) for z in self.u],
            "v": [_pair(z) for z in self.v],
            "h": _pair(self.h),
            "selectors": [list(pair) for pair in self.selectors],
        }

    @classmethod
    def from_dict(cls, payload: dict, root: RootOfUnity) -> "RootChoice":
        return cls(
            root=root,
            u=tuple(complex(*pair) for pair in payload["u"]),
            v=tuple(complex(*pair) for pair in payload["v"]),
            h=complex(*payload["h"]),
            selectors=tuple(tuple(pair) for pair in payload.get("selectors", [])),
        )


@dataclass(frozen=True)
class SphereRootChoice(RootChoice):
    """Root choice plus the puncture central values p1..p4."""

    p1: complex = -1.0
    p2: complex = -1.0
    p3: complex = -1.0
    p4: complex = -1.0

    @property
    def centrals(self) -> Centrals:
        return Centrals(complex(self.h), complex(self.p1), complex(self.p2), complex(self.p3), complex(self.p4))

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["p"] = [_pair(complex(p)) for p in (self.p1, self.p2, self.p3, self.p4)]
        return payload

    @classmethod
    def from_dict(cls, payload: dict, root: RootOfUnity) -> "SphereRootChoice":
        base = RootChoice.from_dict(payload, root)
        p1, p2, p3, p4 = (complex(*pair) for pair in payload["p"])
        return cls(root=root, u=base.u, v=base.v, h=base.h, selectors=base.selectors,
                   p1=p1, p2=p2, p3=p3, p4=p4)


def _normalize_selectors(selectors: Optional[Sequence[Selector]], n: int, N: int) -> Tuple[Selector, ...]:
    pairs = [tuple(int(s) for s in pair) for pair in (selectors or [])]
    if len(pairs) > n:
        raise InvalidParameter(f"Got {len(pairs)} selector pairs for a word of length {n}")
    pairs += [(0, 0)] * (n - len(pairs))
    for r, s in pairs:
        if not (0 <= r < N and 0 <= s < N):
            raise InvalidParameter(f"Selector pair {(r, s)} outside 0..{N - 1}")
    return tuple(pairs)


def _roots_along(trajectory: Sequence[ShearWeights], root: RootOfUnity,
                 selectors: Optional[Sequence[Selector]]):
    if len(trajectory) < 2:
        raise InvalidParameter("A trajectory needs at least two points")
    residual = closing_residual(trajectory)
    if residual > PERIODICITY_TOL:
        raise NonPeriodicTrajectory(f"Trajectory does not close up: residual {residual:.3g}")

    n = len(trajectory) - 1
    pairs = _normalize_selectors(selectors, n, root.N)
    u = [nth_root(trajectory[i].x1, root, r) for i, (r, _) in enumerate(pairs)]
    v = [nth_root(trajectory[i].x2, root, s) for i, (_, s) in enumerate(pairs)]
    return tuple(u + u[:1]), tuple(v + v[:1]), pairs


def choose_roots(trajectory: Sequence[ShearWeights], root: RootOfUnity,
                 selectors: Optional[Sequence[Selector]] = None, h: complex = 1.0) -> RootChoice:
    """u_i = principal root of x1_(i) times q^{4 r_i}, likewise v_i; u_n, v_n forced to u_0, v_0."""
    u, v, pairs = _roots_along(trajectory, root, selectors)
    return RootChoice(root=root, u=u, v=v, h=complex(h), selectors=pairs)


def choose_sphere_roots(trajectory: Sequence[ShearWeights], root: RootOfUnity,
                        selectors: Optional[Sequence[Selector]] = None, h: complex = 1.0,
                        p: Sequence[complex] = (-1.0, -1.0, -1.0, -1.0)) -> SphereRootChoice:
    u, v, pairs = _roots_along(trajectory, root, selectors)
    p1, p2, p3, p4 = (complex(value) for value in p)
    return SphereRootChoice(root=root, u=u, v=v, h=complex(h), selectors=pairs,
                            p1=p1, p2=p2, p3=p3, p4=p4)
