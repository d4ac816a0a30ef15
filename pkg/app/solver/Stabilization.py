import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.law.ConservationLaw import ConservationLaw
from app.solver.NumericalFlux import FluxFamily, flux_family

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilizationConfig:
    """Streamline-diffusion and shock-capturing constants plus the flux family.

    C0_interior / C0_boundary are optional caps on the face coefficient C_T; by default
    the exact local Engquist-Osher or Lax-Friedrichs value is used.
    """

    C1: float = 0.5
    C2: float = 0.1
    C3: float = 0.1
    beta: float = 0.25
    flux_family: FluxFamily = FluxFamily.ENGQUIST_OSHER
    C0_interior: Optional[float] = None
    C0_boundary: Optional[float] = None

    def __post_init__(self):
        for name in ("C1", "C2", "C3"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 < self.beta < 0.5:
            raise ValueError(f"beta must lie in (0, 0.5), got {self.beta}")
        for name in ("C0_interior", "C0_boundary"):
            value = getattr(self, name)
            if value is not None and value <= 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        object.__setattr__(self, "flux_family", flux_family(self.flux_family))

    def check_law(self, law: ConservationLaw):
        if self.flux_family is FluxFamily.ENGQUIST_OSHER and not law.vanishes_at_zero:
            raise ValueError(f"the Engquist-Osher flux needs f(0) = 0; law {law.name} has f(0) = {float(law.flux(0.0))}")
        if law.C0 is None:
            return
        # C0 = sup sqrt(1 + f'^2) on the state range; interior faces need half of sup |f'|
        speed = np.sqrt(max(law.C0**2 - 1.0, 0.0))
        for name, needed in (("C0_interior", 0.5 * speed), ("C0_boundary", speed)):
            value = getattr(self, name)
            if value is None:
                continue
            if value > law.C0:
                raise ValueError(f"{name} = {value} exceeds C0 = {law.C0:.6g} of law {law.name}")
            if value < needed * (1.0 - 1e-12):
                raise ValueError(
                    f"{name} = {value} is below the flux coefficient {needed:.6g} that law {law.name} "
                    "needs on its state range"
                )


def streamline_delta(cfg: StabilizationConfig, law: ConservationLaw, u, h_T) -> np.ndarray:
    """delta = C1 h_T / ||F'(u)||, pointwise; the time component of F' keeps the norm >= 1."""
    return cfg.C1 * np.asarray(h_T, dtype=float) / law.flux_derivative_norm(u)


def shock_capturing_eps(cfg: StabilizationConfig, R, h: float, p: int) -> np.ndarray:
    """eps_hat = max(C2 h^(2 - beta) R, C3 h^(p + 1/2)) with the global mesh size h."""
    R = np.asarray(R, dtype=float)
    return np.maximum(cfg.C2 * h ** (2.0 - cfg.beta) * R, cfg.C3 * h ** (p + 0.5))


def combine_indicator(volume_max, flux_jump_max, state_jump_max, h_T) -> np.ndarray:
    """R(U)|_T = max_T |L(U)| + (max |[[F(U) n]]| + max C_T |[[U]]|) / h_T over the faces of d*T."""
    return np.asarray(volume_max) + (np.asarray(flux_jump_max) + np.asarray(state_jump_max)) / np.asarray(h_T)
