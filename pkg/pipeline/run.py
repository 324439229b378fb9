"""End-to-end pipeline: word -> periodic weights -> roots -> C_phi -> verdict."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from mcg.word import IntMatrix2x2, MappingClassWord, cyclic_normalize, decompose
from shear.dynamics import ShearWeights, SurfaceKind, evolve, select_geometric
from shear.solver import SeedGrid, is_isolated, solve_periodic
from weyl.roots import RootOfUnity
from weyl.torus import relative_residual
from invariants.assembly import assemble, word_residual
from invariants.report import InvariantReport
from invariants.roots import choose_roots, choose_sphere_roots
from invariants.spectrum import spectral_distance
from invariants.sphere import SPHERE_MODEL, assemble_sphere_invariant
from invariants.torus import TORUS_MODEL, assemble_invariant
from utils.config import Config, get_config, parse_seed_grid
from utils.errors import DegenerateWeight, InvalidParameter, NoGeometricCandidate, QHIError
from utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_ERROR = 2
EXIT_INTERNAL = 3

NEGATIVE_TRACE_FLAG = "negative-trace: composed with elliptic involution"
NON_GEOMETRIC_FLAG = "non-geometric"
MANUAL_WEIGHTS_FLAG = "manual-weights"
NON_ISOLATED_FLAG = "non-isolated: weights lie on a family of periodic points"
SPHERE_CENTRALS_FLAG = "sphere-centrals: p1..p4 = -1 with sign-twisted shears, not the unit normalization"

# Sphere central values the pipeline runs at; the sign-twisted recursion is this case
SPHERE_CENTRALS = (-1.0, -1.0, -1.0, -1.0)


@dataclass
class RunConfig:
    surface: SurfaceKind = SurfaceKind.TORUS
    N: int = 3
    k: int = 1
    word: Optional[str] = None
    matrix: Optional[Tuple[int, int, int, int]] = None
    selectors: Optional[List[Tuple[int, int]]] = None
    weights: Optional[Tuple[complex, complex]] = None
    h: complex = 1.0
    newton_tol: float = 1e-12
    dedup_radius: float = 1e-8
    max_newton_iter: int = 80
    step_tol: float = 1e-10
    verify_tol: float = 1e-8
    cyclic_tol: float = 1e-6
    max_condition: float = 1e12
    seed_grid: str = "10,10,0.2,5"
    output: Optional[str] = None

    def validate(self) -> bool:
        self.surface = SurfaceKind.parse(self.surface)
        RootOfUnity(self.N, self.k)
        if (self.word is None) == (self.matrix is None):
            raise InvalidParameter("Give exactly one of a word or a matrix")
        for name in ("newton_tol", "dedup_radius", "step_tol", "verify_tol", "cyclic_tol", "max_condition"):
            if not getattr(self, name) > 0:
                raise InvalidParameter(f"Tolerance '{name}' must be positive")
        if self.max_newton_iter < 1:
            raise InvalidParameter("max_newton_iter must be at least 1")
        if complex(self.h) == 0:
            raise InvalidParameter("h must be nonzero")
        if self.surface is SurfaceKind.SPHERE and complex(self.h) != 1:
            raise InvalidParameter("The sphere pipeline runs at h = 1")
        parse_seed_grid(self.seed_grid)
        return True

    @property
    def thresholds(self) -> Dict[str, float]:
        return {
            "perStep": self.step_tol,
            "fullWord": self.verify_tol,
            "cyclicCheck": self.cyclic_tol,
            "maxCondition": self.max_condition,
        }

    @property
    def root(self) -> RootOfUnity:
        return RootOfUnity(self.N, self.k)

    @classmethod
    def from_config(cls, config: Optional[Config] = None, **overrides) -> "RunConfig":
        """Pipeline defaults from the environment, with explicit overrides on top."""
        config = config or get_config()
        n_mod, n_arg, r_min, r_max = config.get_seed_grid()
        values = dict(
            newton_tol=config.NEWTON_TOL,
            dedup_radius=config.DEDUP_RADIUS,
            max_newton_iter=config.MAX_NEWTON_ITER,
            step_tol=config.STEP_TOL,
            verify_tol=config.VERIFY_TOL,
            cyclic_tol=config.CYCLIC_TOL,
            max_condition=config.MAX_CONDITION,
            seed_grid=f"{n_mod},{n_arg},{r_min},{r_max}",
        )
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class RunResult:
    report: Optional[InvariantReport]
    exit_code: int
    error: Optional[dict] = None
    word: Optional[str] = None
    checks: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK

    @property
    def status(self) -> str:
        if self.exit_code == EXIT_OK:
            return "ok"
        return "threshold" if self.exit_code == EXIT_THRESHOLD else "failed"


def resolve_word(config: RunConfig) -> Tuple[MappingClassWord, List[str]]:
    """The LR word to run, plus flags raised while finding it."""
    flags = []
    if config.matrix is not None:
        m = IntMatrix2x2(*config.matrix)
        if m.trace < 0:
            flags.append(NEGATIVE_TRACE_FLAG)
        word = decompose(m)
        logger.info(f"🧮 Matrix {m.to_list()} decomposes as {word}")
    else:
        word = MappingClassWord(config.word.strip().upper())
    word.require_pseudo_anosov()
    return word, flags


def _fallback(solutions: Sequence[ShearWeights], word: MappingClassWord, kind: SurfaceKind) -> ShearWeights:
    for w in sorted(solutions, key=lambda s: s.key):
        try:
            evolve(word, w, kind)
            return w
        except DegenerateWeight:
            continue
    raise NoGeometricCandidate(f"No admissible periodic solution for {word}")


def periodic_weights(config: RunConfig, word: MappingClassWord, flags: List[str]) -> List[ShearWeights]:
    """Trajectory of the chosen periodic weights, closing up after the whole word.

    Solving and selection run on the cyclic normal form, so all rotations of a word share
    one periodic orbit; the trajectory returned starts at the orbit point for the word as given.
    """
    kind = config.surface
    hN = complex(config.h) ** config.N

    if config.weights is not None:
        flags.append(MANUAL_WEIGHTS_FLAG)
        x1, x2 = config.weights
        return evolve(word, ShearWeights(x1, x2, hN), kind)

    base = cyclic_normalize(word)
    shift = next(s for s in range(len(base)) if base.rotate(s) == word)

    seeds = SeedGrid.from_spec(config.seed_grid)
    solutions = solve_periodic(
        base, kind, hN=hN, seeds=seeds,
        tol=config.newton_tol, dedup_radius=config.dedup_radius, max_iter=config.max_newton_iter,
    )
    try:
        chosen = select_geometric(solutions, base, kind)
        logger.info(f"🎯 Geometric weights x1={chosen.x1:.6g}, x2={chosen.x2:.6g}")
    except NoGeometricCandidate:
        chosen = _fallback(solutions, base, kind)
        flags.append(NON_GEOMETRIC_FLAG)
        logger.warning(f"⚠️  No geometric candidate for {base}; using x1={chosen.x1:.6g}, x2={chosen.x2:.6g}")
    if not is_isolated(base, chosen, kind):
        flags.append(NON_ISOLATED_FLAG)
        logger.warning(f"⚠️  Chosen weights for {base} lie on a family of periodic points")

    trajectory = evolve(base, chosen, kind)
    if shift:
        logger.info(f"🔁 {word} is {base} rotated by {shift}")
        return evolve(word, trajectory[shift], kind)
    return trajectory


def _threshold_error(report: InvariantReport) -> dict:
    failed = report.failures()
    return {
        "stage": "thresholds",
        "error": "ThresholdExceeded",
        "message": f"Residuals above thresholds: {', '.join(failed)}",
        "failed": failed,
    }


def run(config: RunConfig) -> RunResult:
    """Run the full pipeline; errors come back as a structured object, never raised."""
    word = None
    try:
        config.validate()
        root = config.root
        word, flags = resolve_word(config)
        logger.info(f"🚀 Computing {config.surface.value} invariant of {word} at N={root.N}, k={root.k}")

        trajectory = periodic_weights(config, word, flags)
        if config.surface is SurfaceKind.TORUS:
            roots = choose_roots(trajectory, root, config.selectors, h=config.h)
            report = assemble_invariant(word, root, roots, config.thresholds, weights=trajectory, flags=flags)
        else:
            flags.append(SPHERE_CENTRALS_FLAG)
            roots = choose_sphere_roots(trajectory, root, config.selectors, h=config.h, p=SPHERE_CENTRALS)
            report = assemble_sphere_invariant(word, root, roots, config.thresholds, weights=trajectory, flags=flags)

        if config.output:
            path = report.write(config.output)
            logger.info(f"💾 Report written to {path}")

        if not report.passed:
            error = _threshold_error(report)
            logger.warning(f"⚠️  {error['message']}")
            return RunResult(report=report, exit_code=EXIT_THRESHOLD, error=error, word=str(word))

        logger.info(f"✅ Invariant of {word} certified: full-word residual {report.residuals['fullWord']:.3g}")
        return RunResult(report=report, exit_code=EXIT_OK, word=str(word))

    except QHIError as e:
        logger.error(f"❌ Stage '{e.stage}' failed: {e}")
        return RunResult(report=None, exit_code=EXIT_ERROR, error=e.to_dict(), word=str(word) if word else config.word)
    except Exception as e:
        logger.exception(f"❌ Unexpected error: {e}")
        error = {"stage": "internal", "error": type(e).__name__, "message": str(e)}
        return RunResult(report=None, exit_code=EXIT_INTERNAL, error=error, word=str(word) if word else config.word)


def verify_report(path: Union[str, Path], thresholds: Optional[Dict[str, float]] = None) -> RunResult:
    """Re-check a stored report against a fresh computation from its stored roots."""
    try:
        stored = InvariantReport.load(path)
        limits = {**stored.thresholds, **(thresholds or {})}
        model = SPHERE_MODEL if stored.surface == SurfaceKind.SPHERE.value else TORUS_MODEL
        word = MappingClassWord(stored.word)

        fresh = assemble(word, stored.roots, model, thresholds=limits, weights=stored.weights, flags=stored.flags)
        first = model.representation(stored.roots, 0)
        last = model.representation(stored.roots, stored.roots.n)
        checks = {
            "storedFullWord": word_residual(word, model, first, last, stored.C),
            "matrix": relative_residual(stored.C, fresh.C),
            "spectrum": spectral_distance(stored.spectrum.eigenvalues, fresh.spectrum.eigenvalues),
        }
        failed = list(fresh.failures())
        if not checks["storedFullWord"] <= limits["fullWord"]:
            failed.append("storedFullWord")
        if not checks["matrix"] <= limits["fullWord"]:
            failed.append("matrix")
        if not checks["spectrum"] <= limits["cyclicCheck"]:
            failed.append("spectrum")

        if failed:
            error = {
                "stage": "verify",
                "error": "ThresholdExceeded",
                "message": f"Stored report fails: {', '.join(failed)}",
                "failed": failed,
            }
            logger.warning(f"⚠️  {error['message']}")
            return RunResult(report=fresh, exit_code=EXIT_THRESHOLD, error=error, word=stored.word, checks=checks)

        logger.info(f"✅ Stored report {path} verified")
        return RunResult(report=fresh, exit_code=EXIT_OK, word=stored.word, checks=checks)

    except QHIError as e:
        logger.error(f"❌ Verification of {path} failed at stage '{e.stage}': {e}")
        return RunResult(report=None, exit_code=EXIT_ERROR, error=e.to_dict())
    except (OSError, KeyError, TypeError, ValueError) as e:
        logger.error(f"❌ Could not read report {path}: {e}")
        error = {"stage": "verify", "error": type(e).__name__, "message": str(e)}
        return RunResult(report=None, exit_code=EXIT_ERROR, error=error)
