# Database package for the invariant run archive

from .models import Base, InvariantRun
from .queries import (
    record_run,
    get_runs_by_word,
    get_failed_runs,
    get_latest_run,
    get_run_summary,
)

__all__ = [
    # Models
    'Base',
    'InvariantRun',

    # Query functions
    'record_run',
    'get_runs_by_word',
    'get_failed_runs',
    'get_latest_run',
    'get_run_summary',
]
