"""Multi-start damped Newton solver for periodic shear trajectories.

All starts of the seed grid are iterated at once as numpy arrays. The
composite map is rational, so its Jacobian is accumulated exactly by the
chain rule while the word is evaluated.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from mcg.word import MappingClassWord
from shear.dynamics import (
    TINY,
    ShearWeights,
    SurfaceKind,
    closing_residual,
    evolve,
    is_degenerate,
    is_nonreal,
)
from utils.config import parse_seed_grid
from utils.errors import DegenerateWeight, InvalidParameter, NoSolutionFound
from utils.logger import get_logger

logger = get_logger(__name__)

MAX_HALVINGS = 12
POLISH_GATE = 1e-6
POLISH_ITERATIONS = 25
ESCAPE_RADIUS = 1e12
SNAP_TOL = 1e-13
POLE_GUARD = 1e-6
ISOLATION_TOL = 1e-8


@dataclass(frozen=True)
class SeedGrid:
    """Log-modulus x argument grid of starting values, per coordinate."""

    n_mod: int = 10
    n_arg: int = 10
    r_min: float = 0.2
    r_max: float = 5.0

    def __post_init__(self):
        if self.n_mod < 1 or self.n_arg < 1 or not 0 < self.r_min <= self.r_max:
            raise InvalidParameter(f"Invalid seed grid {self}")

    @classmethod
    def from_spec(cls, spec: str) -> "SeedGrid":
        return cls(*parse_seed_grid(spec))

    def to_spec(self) -> str:
        return f"{self.n_mod},{self.n_arg},{self.r_min!r},{self.r_max!r}"

    def points(self) -> np.ndarray:
        """Starting values for one coordinate; arguments cover (-pi, pi]."""
        moduli = np.geomspace(self.r_min, self.r_max, self.n_mod)
        arguments = -np.pi + 2 * np.pi * np.arange(1, self.n_arg + 1) / self.n_arg
        return (moduli[:, None] * np.exp(1j * arguments[None, :])).ravel()

    def starts(self) -> Tuple[np.ndarray, np.ndarray]:
        """Product grid over both coordinates."""
        pts = self.points()
        z1, z2 = np.meshgrid(pts, pts, indexing="ij")
        return z1.ravel(), z2.ravel()


def _evaluate(letters: str, scale: complex, z1: np.ndarray, z2: np.ndarray):
    """Endpoint of the word and the Jacobian [[a, b], [c, d]] of the composite map."""
    a = np.ones_like(z1)
    b = np.zeros_like(z1)
    c = np.zeros_like(z1)
    d = np.ones_like(z1)
    for letter in letters:
        if letter == "R":
            t = 1 + z1
            n1 = scale * z1 / (z2 * t * t)
            n2 = t * t * z2
            j11 = scale * (1 - z1) / (z2 * t ** 3)
            j12 = -n1 / z2
            j21 = 2 * t * z2
            j22 = t * t
        else:
            s = 1 + z2
            n1 = z1 * z2 * z2 / (s * s)
            n2 = scale * s * s / (z1 * z2)
            j11 = z2 * z2 / (s * s)
            j12 = 2 * z1 * z2 / s ** 3
            j21 = -n2 / z1
            j22 = scale * s * (z2 - 1) / (z1 * z2 * z2)
        a, b, c, d = j11 * a + j12 * c, j11 * b + j12 * d, j21 * a + j22 * c, j21 * b + j22 * d
        z1, z2 = n1, n2
    return z1, z2, a, b, c, d


def _residual(z1, z2, e1, e2) -> np.ndarray:
    r1 = np.abs(e1 - z1) / np.maximum(np.abs(z1), TINY)
    r2 = np.abs(e2 - z2) / np.maximum(np.abs(z2), TINY)
    res = np.maximum(r1, r2)
    return np.where(np.isfinite(res), res, np.inf)


def _newton_direction(z1, z2, e1, e2, a, b, c, d):
    """Solve (J - I) delta = -(e - z) by Cramer's rule."""
    f1 = e1 - z1
    f2 = e2 - z2
    m11 = a - 1
    m22 = d - 1
    det = m11 * m22 - b * c
    d1 = -(m22 * f1 - b * f2) / det
    d2 = -(m11 * f2 - c * f1) / det
    return d1, d2


def _newton(letters: str, scale: complex, z1: np.ndarray, z2: np.ndarray,
            tol: float, max_iter: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Damped Newton on all starts; returns final points and residuals."""
    z1 = z1.astype(complex).copy()
    z2 = z2.astype(complex).copy()
    alive = np.ones(z1.shape, dtype=bool)

    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            e1, e2, a, b, c, d = _evaluate(letters, scale, z1, z2)
            res = _residual(z1, z2, e1, e2)
            alive &= np.isfinite(res)
            active = alive & (res > tol)
            if not active.any():
                break

            idx = np.flatnonzero(active)
            d1, d2 = _newton_direction(z1[idx], z2[idx], e1[idx], e2[idx], a[idx], b[idx], c[idx], d[idx])
            lam = np.ones(idx.size)
            done = np.zeros(idx.size, dtype=bool)
            for _ in range(MAX_HALVINGS):
                pos = np.flatnonzero(~done)
                if pos.size == 0:
                    break
                t1 = z1[idx[pos]] + lam[pos] * d1[pos]
                t2 = z2[idx[pos]] + lam[pos] * d2[pos]
                f1, f2, *_ = _evaluate(letters, scale, t1, t2)
                trial = _residual(t1, t2, f1, f2)
                ok = trial < res[idx[pos]]
                accepted = pos[ok]
                z1[idx[accepted]] = t1[ok]
                z2[idx[accepted]] = t2[ok]
                done[accepted] = True
                lam[pos[~ok]] *= 0.5

            alive[idx[~done]] = False
            escaped = (np.abs(z1) > ESCAPE_RADIUS) | (np.abs(z2) > ESCAPE_RADIUS)
            alive &= ~escaped

        e1, e2, *_ = _evaluate(letters, scale, z1, z2)
        res = _residual(z1, z2, e1, e2)
    res[~alive] = np.inf
    return z1, z2, res


def _snap(z: complex) -> complex:
    if abs(z.imag) <= SNAP_TOL * max(1.0, abs(z)):
        return complex(z.real, 0.0)
    return z


def _polish(letters: str, scale: complex, w: ShearWeights) -> ShearWeights:
    """A few undamped Newton steps on a single candidate, keeping the best point."""
    z1 = np.array([w.x1])
    z2 = np.array([w.x2])
    best = (np.inf, w.x1, w.x2)
    with np.errstate(all="ignore"):
        for _ in range(POLISH_ITERATIONS):
            e1, e2, a, b, c, d = _evaluate(letters, scale, z1, z2)
            res = float(_residual(z1, z2, e1, e2)[0])
            if res < best[0]:
                best = (res, complex(z1[0]), complex(z2[0]))
            if res == 0.0:
                break
            d1, d2 = _newton_direction(z1, z2, e1, e2, a, b, c, d)
            if not (np.isfinite(d1).all() and np.isfinite(d2).all()):
                break
            z1, z2 = z1 + d1, z2 + d2
    return ShearWeights(_snap(best[1]), _snap(best[2]), w.hN)


def periodic_residual(word: MappingClassWord, w: ShearWeights, kind: SurfaceKind) -> float:
    """|evolve(word, w).last - w|, relative to the size of w."""
    return closing_residual(evolve(word, w, kind))


def isolation_measure(word: MappingClassWord, w: ShearWeights, kind: SurfaceKind) -> float:
    """|det(J - I)| at w, relative to the size of its two products.

    J is the Jacobian of the word's composite map. A value near zero means w sits
    on a family of periodic points rather than being an isolated one.
    """
    scale = kind.sign * complex(w.hN)
    with np.errstate(all="ignore"):
        _, _, a, b, c, d = _evaluate(word.letters, scale, np.array([w.x1]), np.array([w.x2]))
        diagonal = (a[0] - 1) * (d[0] - 1)
        cross = b[0] * c[0]
    size = max(1.0, abs(diagonal), abs(cross))
    measure = abs(diagonal - cross) / size
    return float(measure) if np.isfinite(measure) else 0.0


def is_isolated(word: MappingClassWord, w: ShearWeights, kind: SurfaceKind, tol: float = ISOLATION_TOL) -> bool:
    return isolation_measure(word, w, kind) > tol


def _near_pole(trajectory: List[ShearWeights]) -> bool:
    return any(is_degenerate(p.x1, POLE_GUARD) or is_degenerate(p.x2, POLE_GUARD) for p in trajectory)


def _collapse_families(word: MappingClassWord, solutions: List[ShearWeights],
                       kind: SurfaceKind, hN: complex) -> List[ShearWeights]:
    """Keep isolated solutions; replace non-isolated ones by one representative.

    The representative is the least key among the nonreal ones when there are any,
    joined by its conjugate when hN is real.
    """
    isolated = [w for w in solutions if is_isolated(word, w, kind)]
    family = [w for w in solutions if not is_isolated(word, w, kind)]
    if not family:
        return isolated
    representative = min(family, key=lambda w: (0 if is_nonreal(w.x1) or is_nonreal(w.x2) else 1, w.key))
    kept = [representative]
    if hN.imag == 0 and (is_nonreal(representative.x1) or is_nonreal(representative.x2)):
        kept.append(representative.conjugate())
    logger.warning(
        f"⚠️  {len(family)} non-isolated periodic points for {word.letters}; kept {len(kept)} representative(s)"
    )
    return isolated + kept


def _dedup(candidates: List[ShearWeights], radius: float) -> List[ShearWeights]:
    unique: List[ShearWeights] = []
    for w in sorted(candidates, key=lambda s: s.key):
        scale = max(1.0, abs(w.x1), abs(w.x2))
        if all(w.distance(u) > radius * scale for u in unique):
            unique.append(w)
    return unique


def solve_periodic(
    word: MappingClassWord,
    kind: SurfaceKind,
    hN: complex = 1.0,
    seeds: Optional[SeedGrid] = None,
    tol: float = 1e-12,
    dedup_radius: float = 1e-8,
    max_iter: int = 80,
) -> List[ShearWeights]:
    """All periodic points of the word's shear map found from the seed grid.

    Returns the solutions sorted by key; the set is closed under complex
    conjugation whenever hN is real. Residuals are relative to each coordinate,
    points whose orbit comes within POLE_GUARD of 0 or -1 are dropped, and a
    family of non-isolated periodic points is reported by one representative.
    """
    seeds = seeds or SeedGrid()
    hN = complex(hN)
    if abs(hN) == 0:
        raise InvalidParameter("hN must be nonzero")
    scale = kind.sign * hN
    letters = word.letters

    z1, z2 = seeds.starts()
    logger.info(f"🔍 Solving periodic weights for {kind.value} word {letters}: {z1.size} starts")
    z1, z2, res = _newton(letters, scale, z1, z2, tol, max_iter)

    close = np.flatnonzero(res <= POLISH_GATE)
    raw = [ShearWeights(complex(z1[i]), complex(z2[i]), hN) for i in close]
    candidates = _dedup(raw, dedup_radius)
    if abs(hN.imag) == 0:
        candidates = _dedup(candidates + [w.conjugate() for w in candidates], dedup_radius)

    solutions = []
    for w in candidates:
        polished = _polish(letters, scale, w)
        if is_degenerate(polished.x1) or is_degenerate(polished.x2):
            continue
        try:
            trajectory = evolve(word, polished, kind)
        except DegenerateWeight:
            continue
        if closing_residual(trajectory) <= tol and not _near_pole(trajectory):
            solutions.append(polished)

    solutions = _collapse_families(word, _dedup(solutions, dedup_radius), kind, hN)
    solutions = sorted(solutions, key=lambda s: s.key)
    logger.info(
        f"✅ {len(close)} starts converged, {len(solutions)} distinct periodic solutions for {letters}"
    )
    if not solutions:
        raise NoSolutionFound(f"No start converged to a periodic point of {kind.value} word {letters}")
    return solutions
