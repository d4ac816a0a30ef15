from app.solver.DGSolution import DGSolution
from app.solver.NumericalFlux import FluxFamily, ct_coefficient, face_flux_terms, numerical_flux
from app.solver.SlabSolver import (
    MarchError,
    NewtonSettings,
    SlabReport,
    SlabSolveError,
    conservation_balance,
    march,
    solve_slab,
)
from app.solver.SlabSystem import SlabSystem, assemble_slab_residual, residual_indicator, stabilization_params
from app.solver.Stabilization import StabilizationConfig

__all__ = [
    "DGSolution",
    "FluxFamily",
    "ct_coefficient",
    "face_flux_terms",
    "numerical_flux",
    "MarchError",
    "NewtonSettings",
    "SlabReport",
    "SlabSolveError",
    "conservation_balance",
    "march",
    "solve_slab",
    "SlabSystem",
    "assemble_slab_residual",
    "residual_indicator",
    "stabilization_params",
    "StabilizationConfig",
]
