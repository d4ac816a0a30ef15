"""Slab-by-slab solution of the DG scheme.

Each slab is solved by damped Newton with delta and eps_hat frozen, inside an outer
Picard loop that refreshes them from the latest state. C_T stays live in Newton.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse.linalg import spsolve

from app.element.ReferenceElement import ReferenceElement
from app.law.ConservationLaw import ConservationLaw
from app.law.ProblemData import ProblemData
from app.mesh.SpaceTimeMesh import SpaceTimeMesh
from app.solver.DGSolution import DGSolution
from app.solver.SlabSystem import SlabSystem
from app.solver.Stabilization import StabilizationConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NewtonSettings:
    max_iter: int = 30
    abs_tol: float = 1e-10
    min_damping: float = 2.0**-10
    max_outer: int = 10
    outer_rtol: float = 1e-8

    def __post_init__(self):
        if self.max_iter < 1 or self.max_outer < 1:
            raise ValueError("max_iter and max_outer must be at least 1")
        if self.abs_tol <= 0.0 or self.outer_rtol <= 0.0:
            raise ValueError("tolerances must be positive")
        if not 0.0 < self.min_damping <= 1.0:
            raise ValueError(f"min_damping must lie in (0, 1], got {self.min_damping}")


@dataclass(frozen=True)
class SlabReport:
    slab: int
    newton_iterations: int
    outer_iterations: int
    residual_norm: float
    picard_converged: bool
    coefficient_change: float


class SlabSolveError(RuntimeError):
    def __init__(self, slab_index: int, residual_norm: float, iterations: int, reason: str):
        super().__init__(
            f"slab {slab_index}: {reason} after {iterations} Newton iterations (residual {residual_norm:.3e})"
        )
        self.slab_index = slab_index
        self.residual_norm = residual_norm
        self.iterations = iterations


class MarchError(RuntimeError):
    """A slab failed; `partial` holds the slabs solved before it."""

    def __init__(self, slab_index: int, partial: DGSolution, cause: Exception):
        super().__init__(f"march stopped at slab {slab_index}: {cause}")
        self.slab_index = slab_index
        self.partial = partial
        self.cause = cause


def initial_guess(solution: DGSolution, slab: int) -> np.ndarray:
    """The incoming spatial trace extended constant in time."""
    return np.tile(solution.incoming_nodal(slab), (1, solution.p + 1))


def _relative_change(new: np.ndarray, old: np.ndarray) -> float:
    scale = max(float(np.abs(old).max(initial=0.0)), 1e-300)
    return float(np.abs(new - old).max(initial=0.0)) / scale


def _newton(system: SlabSystem, U: np.ndarray, delta, eps_hat, settings: NewtonSettings):
    residual = system.residual(U, delta, eps_hat)
    norm = float(np.abs(residual).max())
    iterations = 0
    while norm > settings.abs_tol:
        if iterations >= settings.max_iter:
            raise SlabSolveError(system.slab, norm, iterations, "Newton did not converge")
        step = spsolve(system.jacobian(U, delta, eps_hat), -residual.ravel()).reshape(U.shape)
        if not np.all(np.isfinite(step)):
            raise SlabSolveError(system.slab, norm, iterations, "singular Newton system")
        damping = 1.0
        while True:
            trial = U + damping * step
            trial_residual = system.residual(trial, delta, eps_hat)
            trial_norm = float(np.abs(trial_residual).max())
            if trial_norm < norm:
                break
            damping *= 0.5
            if damping < settings.min_damping:
                raise SlabSolveError(system.slab, norm, iterations, "damping exhausted")
            logger.debug("slab %d: damping reduced to %.4g", system.slab, damping)
        U, residual, norm = trial, trial_residual, trial_norm
        iterations += 1
        logger.debug("slab %d: Newton %d residual %.3e damping %.4g", system.slab, iterations, norm, damping)
    return U, iterations, norm


def solve_slab(solution: DGSolution, slab_index: int, newton: Optional[NewtonSettings] = None) -> DGSolution:
    settings = NewtonSettings() if newton is None else newton
    system = SlabSystem(solution, slab_index)
    U = initial_guess(solution, slab_index)
    delta, eps_hat, C = system.coefficients(U)

    total_newton, change, converged = 0, np.inf, False
    for outer in range(1, settings.max_outer + 1):
        U, iterations, norm = _newton(system, U, delta, eps_hat, settings)
        total_newton += iterations
        frozen = (delta, eps_hat)
        new_delta, new_eps, new_C = system.coefficients(U)
        change = max(
            _relative_change(new_delta, delta), _relative_change(new_eps, eps_hat), _relative_change(new_C, C)
        )
        logger.debug("slab %d: outer %d coefficient change %.3e", slab_index, outer, change)
        if change < settings.outer_rtol:
            converged = True
            break
        delta, eps_hat, C = new_delta, new_eps, new_C
    if not converged:
        logger.warning(
            "slab %d: stabilization coefficients still moving after %d outer iterations (change %.3e); accepted",
            slab_index, settings.max_outer, change,
        )

    solution.store_slab(slab_index, U, *frozen)
    report = SlabReport(slab_index, total_newton, outer, norm, converged, change)
    solution.reports.append(report)
    logger.info(
        "slab %d solved: %d Newton / %d outer iterations, residual %.3e",
        slab_index, total_newton, outer, norm,
    )
    return solution


def march(
    problem: ProblemData,
    law: ConservationLaw,
    cfg: StabilizationConfig,
    mesh: SpaceTimeMesh,
    ref: ReferenceElement,
    newton: Optional[NewtonSettings] = None,
) -> DGSolution:
    """Solve all slabs in order, starting from U_-^0 = I u0."""
    if not np.allclose(mesh.domain, problem.domain):
        raise ValueError(f"mesh domain {mesh.domain} differs from problem domain {problem.domain}")
    if mesh.T_final > problem.T_final * (1.0 + 1e-12):
        raise ValueError(f"mesh reaches t={mesh.T_final}, data only up to {problem.T_final}")
    if ref.dim != 2:
        raise ValueError("the slab solver needs the two-dimensional space-time element")
    if law.C0 is None:
        law = law.with_C0(problem.state_bound())
    cfg.check_law(law)

    solution = DGSolution(mesh, ref, law, problem, cfg)
    for slab in range(mesh.num_slabs):
        try:
            solve_slab(solution, slab, newton)
        except SlabSolveError as error:
            logger.error("%s", error)
            raise MarchError(slab, solution, error) from error
    return solution


def conservation_balance(solution: DGSolution, slab: int) -> float:
    """int_top U - int_bottom U- + boundary numerical fluxes; zero for the v = 1 test."""
    system = SlabSystem(solution, slab)
    F = system.fields(solution.coeffs[slab])
    top = float(np.sum(F.top * system.w_time))
    bottom = float(np.sum(system.incoming * system.w_time))
    left_flux = F.left_terms.value[0] - solution.law.flux(F.left[0])
    right_flux = F.right_terms.value[-1] + solution.law.flux(F.right[-1])
    boundary = float(np.sum((left_flux + right_flux) * system.w_space))
    return top - bottom + boundary
