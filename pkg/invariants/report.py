"""InvariantReport and its versioned JSON codec."""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from shear.dynamics import ShearWeights
from weyl.roots import RootOfUnity
from invariants.roots import RootChoice, SphereRootChoice
from invariants.spectrum import Spectrum
from utils.errors import InvalidParameter

SCHEMA = "qhi/1"


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex_array(payload) -> np.ndarray:
    values = np.asarray(payload, dtype=float)
    return values[..., 0] + 1j * values[..., 1]


@dataclass(frozen=True, eq=False)
class InvariantReport:
    surface: str
    word: str
    root: RootOfUnity
    weights: Tuple[ShearWeights, ...]
    roots: RootChoice
    C: np.ndarray = field(repr=False)
    spectrum: Spectrum = field(repr=False)
    residuals: Dict[str, object] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()

    def failures(self) -> List[str]:
        """Names of the residual checks above their thresholds."""
        per_step = list(self.residuals.get("perStep", [])) or [0.0]
        checks = [
            ("relations", self.residuals.get("relations", 0.0), self.thresholds["perStep"]),
            ("perStep", max(per_step), self.thresholds["perStep"]),
            ("fullWord", self.residuals.get("fullWord", 0.0), self.thresholds["fullWord"]),
            ("cyclicCheck", self.residuals.get("cyclicCheck", 0.0), self.thresholds["cyclicCheck"]),
        ]
        return [name for name, value, limit in checks if not (math.isfinite(value) and value <= limit)]

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        payload = {
            "schema": SCHEMA,
            "surface": self.surface,
            "word": self.word,
            "N": self.root.N,
            "k": self.root.k,
            "weights": [w.to_dict() for w in self.weights],
            "roots": self.roots.to_dict(),
            "C": [[_pair(z) for z in row] for row in self.C],
            "residuals": {
                "relations": float(self.residuals["relations"]),
                "perStep": [float(r) for r in self.residuals["perStep"]],
                "fullWord": float(self.residuals["fullWord"]),
                "cyclicCheck": float(self.residuals["cyclicCheck"]),
            },
            "thresholds": {name: float(value) for name, value in self.thresholds.items()},
            "flags": list(self.flags),
            "passed": self.passed,
            "failures": self.failures(),
        }
        payload.update(self.spectrum.to_dict())
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")
        return path

    @classmethod
    def from_dict(cls, payload: dict) -> "InvariantReport":
        if payload.get("schema") != SCHEMA:
            raise InvalidParameter(f"Unsupported report schema {payload.get('schema')!r}, expected {SCHEMA}")
        root = RootOfUnity(int(payload["N"]), int(payload["k"]))
        choice_type = SphereRootChoice if payload["surface"] == "sphere" else RootChoice
        spectrum = Spectrum(
            eigenvalues=_complex_array(payload["eigenvalues"]),
            ratios=_complex_array(payload["spectrumRatios"]),
            char_poly=_complex_array(payload["charPoly"]),
            condition=float(payload["condition"]),
        )
        return cls(
            surface=payload["surface"],
            word=payload["word"],
            root=root,
            weights=tuple(ShearWeights.from_dict(w) for w in payload["weights"]),
            roots=choice_type.from_dict(payload["roots"], root),
            C=_complex_array(payload["C"]),
            spectrum=spectrum,
            residuals=dict(payload["residuals"]),
            thresholds=dict(payload["thresholds"]),
            flags=tuple(payload.get("flags", [])),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "InvariantReport":
        try:
            payload = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise InvalidParameter(f"Report {path} is not valid JSON: {e}") from e
        return cls.from_dict(payload)
