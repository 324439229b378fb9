"""Database query functions for the run archive."""

import json
from typing import Any, Dict, List, Optional

from sqlalchemy import desc, func
from sqlalchemy.orm import Session

from .models import InvariantRun
from utils.logger import get_logger

logger = get_logger(__name__)


def _selector_text(selectors) -> Optional[str]:
    if not selectors:
        return None
    return ";".join(f"{r}:{s}" for r, s in selectors)


def record_run(session: Session, result, config) -> InvariantRun:
    """
    Archive one pipeline run.

    Args:
        session: Database session
        result: RunResult returned by pipeline.run
        config: RunConfig the run was made with

    Returns:
        InvariantRun: the stored row
    """
    report = result.report
    run = InvariantRun(
        surface=getattr(config.surface, "value", str(config.surface)),
        word=result.word,
        n=config.N,
        k=config.k,
        selectors=_selector_text(config.selectors),
        status=result.status,
    )

    if result.error:
        run.error_stage = result.error.get("stage")
        run.error_message = result.error.get("message")

    if report is not None:
        residuals = report.residuals
        run.relations_residual = float(residuals["relations"])
        run.per_step_residual = max(float(r) for r in residuals["perStep"])
        run.full_word_residual = float(residuals["fullWord"])
        run.cyclic_residual = float(residuals["cyclicCheck"])
        run.flags = ";".join(report.flags) or None
        run.spectrum_json = json.dumps([[float(z.real), float(z.imag)] for z in report.spectrum.ratios])
        run.report_json = report.to_json()

    is_valid, message = run.validate_run_data()
    if not is_valid:
        raise ValueError(f"Refusing to store run: {message}")

    try:
        session.add(run)
        session.commit()
        logger.info(f"💾 Stored run {run.id}: {run.surface} {run.word} N={run.n} ({run.status})")
        return run
    except Exception as e:
        session.rollback()
        logger.error(f"❌ Error storing run for {result.word}: {e}")
        raise


def get_runs_by_word(session: Session, word: str, surface: Optional[str] = None) -> List[InvariantRun]:
    """Get all runs of a word, oldest first."""
    query = session.query(InvariantRun).filter(InvariantRun.word == word)
    if surface:
        query = query.filter(InvariantRun.surface == surface)
    return query.order_by(InvariantRun.id).all()


def get_failed_runs(session: Session, limit: int = 50) -> List[InvariantRun]:
    """Get the most recent runs that failed or exceeded a threshold."""
    return (
        session.query(InvariantRun)
        .filter(InvariantRun.status != "ok")
        .order_by(desc(InvariantRun.id))
        .limit(limit)
        .all()
    )


def get_latest_run(session: Session, word: Optional[str] = None) -> Optional[InvariantRun]:
    """Get the most recent run, optionally for one word."""
    query = session.query(InvariantRun)
    if word:
        query = query.filter(InvariantRun.word == word)
    return query.order_by(desc(InvariantRun.id)).first()


def get_run_summary(session: Session) -> Dict[str, Any]:
    """Get counts per status and the worst residuals over successful runs."""
    counts = dict(
        session.query(InvariantRun.status, func.count(InvariantRun.id))
        .group_by(InvariantRun.status)
        .all()
    )
    worst = session.query(
        func.max(InvariantRun.per_step_residual),
        func.max(InvariantRun.full_word_residual),
        func.max(InvariantRun.cyclic_residual),
    ).filter(InvariantRun.status == "ok").one()

    total = sum(counts.values())
    return {
        "total_runs": total,
        "ok": counts.get("ok", 0),
        "threshold": counts.get("threshold", 0),
        "failed": counts.get("failed", 0),
        "success_rate": (counts.get("ok", 0) / total * 100) if total > 0 else 0,
        "worst_per_step": worst[0],
        "worst_full_word": worst[1],
        "worst_cyclic": worst[2],
    }
