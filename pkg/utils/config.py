"""Configuration utility using environment variables."""

import os
from dotenv import load_dotenv
from pathlib import Path
from typing import Tuple

from utils.errors import InvalidParameter

# Load environment variables from .env file
env_path = Path(".env")
if env_path.exists():
    load_dotenv(env_path)


def parse_seed_grid(spec: str) -> Tuple[int, int, float, float]:
    """Parse a seed grid spec.

    Accepts ``"10x10"`` (moduli x arguments, default radii) or the full
    ``"n_mod,n_arg,r_min,r_max"`` form.
    """
    text = spec.strip().lower()
    try:
        if "x" in text and "," not in text:
            n_mod, n_arg = (int(part) for part in text.split("x"))
            r_min, r_max = 0.2, 5.0
        else:
            parts = [part.strip() for part in text.split(",")]
            if len(parts) != 4:
                raise ValueError("expected four comma-separated fields")
            n_mod, n_arg = int(parts[0]), int(parts[1])
            r_min, r_max = float(parts[2]), float(parts[3])
    except ValueError as e:
        raise InvalidParameter(f"Malformed seed grid '{spec}': {e}") from e

    if n_mod < 1 or n_arg < 1:
        raise InvalidParameter(f"Seed grid needs at least one modulus and one argument: '{spec}'")
    if not 0 < r_min <= r_max:
        raise InvalidParameter(f"Seed grid radii must satisfy 0 < r_min <= r_max: '{spec}'")
    return n_mod, n_arg, r_min, r_max


class Config:
    """Configuration class for the invariant pipeline."""

    def __init__(self):
        # Database Configuration
        self.DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///qhi_runs.db")

        # Application Settings
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
        self.REPORT_DIR = os.getenv("QHI_REPORT_DIR", "reports")

        # Solver
        self.SEED_GRID = os.getenv("QHI_SEED_GRID", "10,10,0.2,5")
        self.NEWTON_TOL = float(os.getenv("QHI_NEWTON_TOL", "1e-12"))
        self.DEDUP_RADIUS = float(os.getenv("QHI_DEDUP_RADIUS", "1e-8"))
        self.MAX_NEWTON_ITER = int(os.getenv("QHI_MAX_NEWTON_ITER", "80"))

        # Verification thresholds
        self.STEP_TOL = float(os.getenv("QHI_STEP_TOL", "1e-10"))
        self.VERIFY_TOL = float(os.getenv("QHI_VERIFY_TOL", "1e-8"))
        self.CYCLIC_TOL = float(os.getenv("QHI_CYCLIC_TOL", "1e-6"))
        self.MAX_CONDITION = float(os.getenv("QHI_MAX_CONDITION", "1e12"))

    def get_database_url(self) -> str:
        """Get database connection URL."""
        return self.DATABASE_URL

    def get_seed_grid(self) -> Tuple[int, int, float, float]:
        """Get the multi-start grid as (n_mod, n_arg, r_min, r_max)."""
        return parse_seed_grid(self.SEED_GRID)

    def get_report_dir(self) -> Path:
        """Get the directory JSON reports are written to."""
        return Path(self.REPORT_DIR)

    def get_thresholds(self) -> dict:
        """Get the verification thresholds recorded in every report."""
        return {
            "perStep": self.STEP_TOL,
            "fullWord": self.VERIFY_TOL,
            "cyclicCheck": self.CYCLIC_TOL,
            "maxCondition": self.MAX_CONDITION,
        }

    def validate(self) -> bool:
        """Validate configuration values."""
        positive_fields = [
            "NEWTON_TOL",
            "DEDUP_RADIUS",
            "STEP_TOL",
            "VERIFY_TOL",
            "CYCLIC_TOL",
            "MAX_CONDITION",
        ]

        for field in positive_fields:
            if not getattr(self, field) > 0:
                raise InvalidParameter(f"Configuration field '{field}' must be positive")

        if self.MAX_NEWTON_ITER < 1:
            raise InvalidParameter("Configuration field 'MAX_NEWTON_ITER' must be at least 1")

        if not self.DATABASE_URL:
            raise InvalidParameter("Required configuration field 'DATABASE_URL' is missing")

        self.get_seed_grid()
        return True

    def to_dict(self) -> dict:
        """Convert configuration to dictionary."""
        return {
            "DATABASE_URL": self.DATABASE_URL,
            "LOG_LEVEL": self.LOG_LEVEL,
            "REPORT_DIR": self.REPORT_DIR,
            "SEED_GRID": self.SEED_GRID,
            "NEWTON_TOL": self.NEWTON_TOL,
            "DEDUP_RADIUS": self.DEDUP_RADIUS,
            "MAX_NEWTON_ITER": self.MAX_NEWTON_ITER,
            "STEP_TOL": self.STEP_TOL,
            "VERIFY_TOL": self.VERIFY_TOL,
            "CYCLIC_TOL": self.CYCLIC_TOL,
            "MAX_CONDITION": self.MAX_CONDITION,
        }


# Global configuration instance
_config = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config()
        _config.validate()
    return _config


def reload_config() -> Config:
    """Reload configuration from environment variables."""
    global _config
    _config = Config()
    _config.validate()
    return _config


def get_database_url() -> str:
    """Get database connection URL."""
    return get_config().get_database_url()


def get_seed_grid() -> Tuple[int, int, float, float]:
    """Get the solver seed grid."""
    return get_config().get_seed_grid()
