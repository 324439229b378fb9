"""Command-line pipeline: single runs, stored-report verification and sweeps."""

from .run import RunConfig, RunResult, run, verify_report, resolve_word
from .sweep import SweepSpec, tabulate

__all__ = ["RunConfig", "RunResult", "run", "verify_report", "resolve_word", "SweepSpec", "tabulate"]
