"""Database models for the invariant run archive."""

from sqlalchemy import Column, Integer, String, Float, DateTime, Text
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()

VALID_SURFACES = ["torus", "sphere"]
VALID_STATUSES = ["ok", "threshold", "failed"]


class InvariantRun(Base):
    """One pipeline run: its configuration, verdict and residuals."""

    __tablename__ = "invariant_runs"

    id = Column(Integer, primary_key=True)
    surface = Column(String(20), nullable=False)  # 'torus' or 'sphere'
    word = Column(String(200), nullable=True)  # canonical LR word; null if the input never parsed
    n = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False, default=1)
    selectors = Column(String(500), nullable=True)  # "r:s;r:s;..."
    status = Column(String(20), nullable=False)  # 'ok', 'threshold' or 'failed'
    error_stage = Column(String(50), nullable=True)
    error_message = Column(Text, nullable=True)

    relations_residual = Column(Float, nullable=True)
    per_step_residual = Column(Float, nullable=True)  # worst step
    full_word_residual = Column(Float, nullable=True)
    cyclic_residual = Column(Float, nullable=True)

    flags = Column(String(500), nullable=True)
    spectrum_json = Column(Text, nullable=True)  # spectrum ratios as [re, im] pairs
    report_json = Column(Text, nullable=True)  # full report, loadable by InvariantReport.from_dict
    created_at = Column(DateTime, default=func.now())

    def validate_run_data(self):
        """Validate that required run data is present and consistent."""
        required_fields = ["surface", "n", "status"]
        missing_fields = [field for field in required_fields if getattr(self, field) is None]

        if missing_fields:
            return False, f"Missing required fields: {missing_fields}"

        if self.surface not in VALID_SURFACES:
            return False, f"Invalid surface: {self.surface}. Must be one of {VALID_SURFACES}"

        if self.status not in VALID_STATUSES:
            return False, f"Invalid status: {self.status}. Must be one of {VALID_STATUSES}"

        if self.n < 1 or self.n % 2 == 0:
            return False, f"N must be odd and positive, got {self.n}"

        if self.status == "failed" and not self.error_stage:
            return False, "Failed runs must record the failing stage"

        return True, "Run data is valid"

    def worst_residual(self):
        """Largest recorded residual, or None for runs that never produced one."""
        values = [
            r for r in (self.relations_residual, self.per_step_residual,
                        self.full_word_residual, self.cyclic_residual)
            if r is not None
        ]
        return max(values) if values else None

    def __repr__(self):
        return f"<InvariantRun(id={self.id}, surface='{self.surface}', word='{self.word}', N={self.n}, status='{self.status}')>"
