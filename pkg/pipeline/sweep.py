"""Batch tabulation of invariants into a CSV summary."""

import csv
import io
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from shear.dynamics import SurfaceKind
from invariants.report import SCHEMA
from pipeline.run import RunConfig, RunResult, run
from utils.logger import get_logger

logger = get_logger(__name__)

COLUMNS = [
    "schema",
    "surface",
    "word",
    "N",
    "k",
    "selectors",
    "status",
    "exit_code",
    "error_stage",
    "error",
    "relations",
    "perStep",
    "fullWord",
    "cyclicCheck",
    "spectrumRatios",
    "charPoly",
    "flags",
]


@dataclass
class SweepSpec:
    """Cartesian sweep over words, N, k and root selectors.

    selectors is None (principal roots only), "all" (every (r_0, s_0) in
    {0..N-1}^2 with the other steps principal) or an explicit list of
    selector lists.
    """

    words: Sequence[str] = ()
    Ns: Sequence[int] = (3,)
    ks: Sequence[int] = (1,)
    surface: SurfaceKind = SurfaceKind.TORUS
    selectors: Union[None, str, Sequence[Sequence[Tuple[int, int]]]] = None
    base: RunConfig = field(default_factory=RunConfig)

    def _selector_options(self, N: int) -> List[Optional[List[Tuple[int, int]]]]:
        if self.selectors is None:
            return [None]
        if self.selectors == "all":
            return [[(r, s)] for r in range(N) for s in range(N)]
        return [list(map(tuple, option)) for option in self.selectors]

    def configs(self) -> Iterator[RunConfig]:
        """Run configurations in key order: word, N, k, selectors."""
        for word in sorted(self.words):
            for N in sorted(self.Ns):
                for k in sorted(self.ks):
                    for option in self._selector_options(N):
                        yield replace(
                            self.base, surface=SurfaceKind.parse(self.surface), word=word, matrix=None,
                            N=N, k=k, selectors=option, output=None,
                        )


def _selector_text(selectors) -> str:
    return ";".join(f"{r}:{s}" for r, s in selectors) if selectors else ""


def _pairs(values) -> str:
    return json.dumps([[float(z.real), float(z.imag)] for z in values])


def result_row(config: RunConfig, result: RunResult) -> Dict[str, object]:
    row = {
        "schema": SCHEMA,
        "surface": SurfaceKind.parse(config.surface).value,
        "word": result.word or config.word,
        "N": config.N,
        "k": config.k,
        "selectors": _selector_text(config.selectors),
        "status": result.status,
        "exit_code": result.exit_code,
        "error_stage": "",
        "error": "",
        "relations": "",
        "perStep": "",
        "fullWord": "",
        "cyclicCheck": "",
        "spectrumRatios": "",
        "charPoly": "",
        "flags": "",
    }
    if result.error:
        row["error_stage"] = result.error.get("stage", "")
        row["error"] = f"{result.error.get('error', '')}: {result.error.get('message', '')}"
    report = result.report
    if report is not None:
        residuals = report.residuals
        row.update(
            relations=repr(float(residuals["relations"])),
            perStep=repr(max(float(r) for r in residuals["perStep"])),
            fullWord=repr(float(residuals["fullWord"])),
            cyclicCheck=repr(float(residuals["cyclicCheck"])),
            spectrumRatios=_pairs(report.spectrum.ratios),
            charPoly=_pairs(report.spectrum.char_poly),
            flags=";".join(report.flags),
        )
    return row


def tabulate(spec: SweepSpec, path: Optional[Union[str, Path]] = None) -> str:
    """Run every configuration of the sweep and return (and optionally write) the CSV.

    A failing row records its error and the sweep continues.
    """
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()

    stats = {"rows": 0, "ok": 0, "threshold": 0, "failed": 0}
    for config in spec.configs():
        result = run(config)
        writer.writerow(result_row(config, result))
        stats["rows"] += 1
        stats[result.status] += 1

    logger.info(
        f"📊 Sweep finished: {stats['rows']} rows, {stats['ok']} ok, "
        f"{stats['threshold']} above thresholds, {stats['failed']} failed"
    )

    text = buffer.getvalue()
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"💾 Sweep written to {path}")
    return text
