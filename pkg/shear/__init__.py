"""Classical shear dynamics and the periodic-orbit solver."""

from .dynamics import (
    SurfaceKind,
    ShearWeights,
    step,
    step_R,
    step_L,
    unstep,
    evolve,
    closing_residual,
    flip_parameters,
    select_geometric,
)
from .solver import SeedGrid, solve_periodic, periodic_residual, is_isolated

__all__ = [
    "SurfaceKind",
    "ShearWeights",
    "step",
    "step_R",
    "step_L",
    "unstep",
    "evolve",
    "closing_residual",
    "flip_parameters",
    "select_geometric",
    "SeedGrid",
    "solve_periodic",
    "periodic_residual",
    "is_isolated",
]
