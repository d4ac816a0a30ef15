from app.diagnostics.EnergyDiagnostics import EnergyReport, energy_terms
from app.diagnostics.Oracles import burgers_riemann, shock_speed, transport
from app.diagnostics.StabilityChecks import (
    BoundednessReport,
    boundary_bln_report,
    boundedness_check_Linf,
    error_norm,
    interface_jumps,
    interpolation_gap,
    observed_orders,
    shock_position,
    slab_norms,
    stability_check_L2,
    time_slice_norm,
)

__all__ = [
    "EnergyReport",
    "energy_terms",
    "burgers_riemann",
    "shock_speed",
    "transport",
    "BoundednessReport",
    "boundary_bln_report",
    "boundedness_check_Linf",
    "error_norm",
    "interface_jumps",
    "interpolation_gap",
    "observed_orders",
    "shock_position",
    "slab_norms",
    "stability_check_L2",
    "time_slice_norm",
]
