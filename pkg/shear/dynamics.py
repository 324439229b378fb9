"""Classical shear-weight recursions on N-th powers of the edge weights.

A point is (x1, x2) = (u^N, v^N) with central datum hN = h^N; the third weight
x3 = hN / (x1 x2) is always derived. The sphere recursion differs from the
torus one by the sign of the h-dependent coordinate.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from mcg.word import MappingClassWord
from utils.errors import DegenerateWeight, InvalidParameter, NoGeometricCandidate
from utils.logger import get_logger

logger = get_logger(__name__)

DEGENERACY_TOL = 1e-10
NONREAL_TOL = 1e-9
TINY = 1e-300


class SurfaceKind(str, Enum):
    TORUS = "torus"
    SPHERE = "sphere"

    @property
    def sign(self) -> int:
        return 1 if self is SurfaceKind.TORUS else -1

    @classmethod
    def parse(cls, value: Union[str, "SurfaceKind"]) -> "SurfaceKind":
        if isinstance(value, cls):
            return value
        aliases = {"torus": cls.TORUS, "torus1": cls.TORUS, "sphere": cls.SPHERE, "sphere4": cls.SPHERE}
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise InvalidParameter(f"Unknown surface '{value}', expected torus or sphere")


@dataclass(frozen=True)
class ShearWeights:
    x1: complex
    x2: complex
    hN: complex = 1.0

    @property
    def x3(self) -> complex:
        return self.hN / (self.x1 * self.x2)

    @property
    def key(self) -> Tuple[float, float, float, float]:
        """Deterministic ordering key."""
        return (
            round(self.x1.real, 9), round(self.x1.imag, 9),
            round(self.x2.real, 9), round(self.x2.imag, 9),
        )

    def distance(self, other: "ShearWeights") -> float:
        return max(abs(self.x1 - other.x1), abs(self.x2 - other.x2))

    def conjugate(self) -> "ShearWeights":
        return ShearWeights(self.x1.conjugate(), self.x2.conjugate(), complex(self.hN).conjugate())

    def to_dict(self, residual: Optional[float] = None) -> dict:
        payload = {
            "x1": [self.x1.real, self.x1.imag],
            "x2": [self.x2.real, self.x2.imag],
            "x3": [self.x3.real, self.x3.imag],
            "hN": [complex(self.hN).real, complex(self.hN).imag],
        }
        if residual is not None:
            payload["residual"] = residual
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "ShearWeights":
        return cls(complex(*payload["x1"]), complex(*payload["x2"]), complex(*payload.get("hN", [1.0, 0.0])))

    def __post_init__(self):
        object.__setattr__(self, "x1", complex(self.x1))
        object.__setattr__(self, "x2", complex(self.x2))
        object.__setattr__(self, "hN", complex(self.hN))


def is_degenerate(z: complex, tol: float = DEGENERACY_TOL) -> bool:
    return abs(z) < tol or abs(z + 1) < tol


def _check(w: ShearWeights, letter: str, where: str, step: Optional[int] = None) -> None:
    for name in ("x1", "x2"):
        value = getattr(w, name)
        if is_degenerate(value):
            raise DegenerateWeight(
                f"{where} of step {letter}: {name} = {value} is within tolerance of 0 or -1", step=step
            )


def step_R(w: ShearWeights, kind: SurfaceKind) -> ShearWeights:
    _check(w, "R", "input")
    t = 1 + w.x1
    result = ShearWeights(kind.sign * w.hN * w.x1 / (w.x2 * t * t), t * t * w.x2, w.hN)
    _check(result, "R", "output")
    return result


def step_L(w: ShearWeights, kind: SurfaceKind) -> ShearWeights:
    _check(w, "L", "input")
    s = 1 + w.x2
    result = ShearWeights(w.x1 * w.x2 * w.x2 / (s * s), kind.sign * w.hN * s * s / (w.x1 * w.x2), w.hN)
    _check(result, "L", "output")
    return result


def step(w: ShearWeights, letter: str, kind: SurfaceKind) -> ShearWeights:
    return step_R(w, kind) if letter == "R" else step_L(w, kind)


def unstep(w: ShearWeights, letter: str, kind: SurfaceKind) -> ShearWeights:
    """Invert one step: solve the recursion for its input given the output.

    Both steps satisfy x1' x2' = sign * hN * (x1 for R, x2 for L).
    """
    _check(w, letter, "inverse input")
    scale = kind.sign * w.hN
    if letter == "R":
        x1 = w.x1 * w.x2 / scale
        result = ShearWeights(x1, w.x2 / (1 + x1) ** 2, w.hN)
    else:
        x2 = w.x1 * w.x2 / scale
        result = ShearWeights(w.x1 * (1 + x2) ** 2 / (x2 * x2), x2, w.hN)
    _check(result, letter, "inverse output")
    return result


def evolve(word: MappingClassWord, w0: ShearWeights, kind: SurfaceKind) -> List[ShearWeights]:
    """Trajectory (w0, w1, ..., wn) with w_i = step_{A_i}(w_{i-1})."""
    trajectory = [w0]
    for index, letter in enumerate(word, start=1):
        try:
            trajectory.append(step(trajectory[-1], letter, kind))
        except DegenerateWeight as e:
            raise DegenerateWeight(f"Step {index} ({letter}) degenerates: {e}", step=index) from e
    return trajectory


def closing_residual(trajectory: Sequence[ShearWeights]) -> float:
    """Distance between the last and first points of a trajectory, relative to each coordinate."""
    first, last = trajectory[0], trajectory[-1]
    return max(
        abs(last.x1 - first.x1) / max(abs(first.x1), TINY),
        abs(last.x2 - first.x2) / max(abs(first.x2), TINY),
    )


def flip_parameters(word: MappingClassWord, trajectory: Sequence[ShearWeights]) -> List[complex]:
    """Weight of the edge flipped by each step: x1 before R, 1/x2 before L."""
    return [
        trajectory[i].x1 if letter == "R" else 1 / trajectory[i].x2
        for i, letter in enumerate(word)
    ]


def is_nonreal(z: complex, tol: float = NONREAL_TOL) -> bool:
    return abs(z.imag) > tol * max(1.0, abs(z))


def _all_nonreal(w: ShearWeights) -> bool:
    return is_nonreal(w.x1) and is_nonreal(w.x2) and is_nonreal(w.x3)


def _orbit_is_nonreal(word: MappingClassWord, w: ShearWeights, kind: SurfaceKind) -> bool:
    try:
        trajectory = evolve(word, w, kind)
    except DegenerateWeight:
        return False
    return any(_all_nonreal(point) for point in trajectory)


def _orientation_rank(word: MappingClassWord, w: ShearWeights, kind: SurfaceKind) -> int:
    try:
        params = flip_parameters(word, evolve(word, w, kind))
    except DegenerateWeight:
        return 3
    if all(p.imag > 0 for p in params):
        return 0
    if all(p.imag < 0 for p in params):
        return 1
    return 2


def select_geometric(
    solutions: Iterable[ShearWeights],
    word: Optional[MappingClassWord] = None,
    kind: SurfaceKind = SurfaceKind.TORUS,
) -> ShearWeights:
    """Pick the candidate shear-bend datum among the periodic solutions.

    Without a word, only solutions with x1, x2 and x3 all nonreal qualify. With a
    word, a solution qualifies when some point of its orbit has all three nonreal,
    so the choice does not depend on where the word is cut. Solutions whose flip
    parameters all lie in the upper half plane come first; Im(x1) > 0 then the
    sorted key break ties.
    """
    if word is None:
        candidates = [w for w in solutions if _all_nonreal(w)]
    else:
        candidates = [w for w in solutions if _orbit_is_nonreal(word, w, kind)]
    if not candidates:
        raise NoGeometricCandidate("No periodic orbit has all three coordinates nonreal")

    def rank(w: ShearWeights):
        orientation = _orientation_rank(word, w, kind) if word is not None else 0
        return (orientation, 0 if w.x1.imag > 0 else 1, w.key)

    chosen = min(candidates, key=rank)
    logger.debug(f"Selected {chosen} among {len(candidates)} nonreal candidates")
    return chosen
