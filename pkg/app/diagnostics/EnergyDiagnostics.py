"""Entropy terms E0..E5, F, F1, F2 of a discrete solution, per slab.

With eta the chosen entropy, traces a (own) and b (neighbor, I u0, or g_D on the boundary):

    E0 = int delta eta''(U) L(U)^2
    E1 = int_{time faces} eta(b) - eta(a) - eta'(a)(b - a)
    E2 = int_{interior space faces} [[Q n]] - [[F n]] {eta'}          E3 = C_T [[U]] [[eta']]
    E4, E5 the same on boundary faces with b = g_D
    F  = -int_{boundary} (1/2 [[F n]] + C_T [[U]]) eta'(g_D)

For eta = U^2/2 the scheme tested with U gives the closed identity

    1/2 ||U_-^N||^2 + sum eps_hat ||grad U||^2 + sum E_i - F + int_{boundary} Q(g_D) n = 1/2 ||I u0||^2
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from app.law.EntropyPair import EntropyPair
from app.solver.DGSolution import DGSolution
from app.solver.SlabSystem import SlabSystem

logger = logging.getLogger(__name__)

SIGN_TOL = 1e-10
IDENTITY_TOL = 1e-8
TERMS = ("E0", "E1", "E2", "E3", "E4", "E5", "F", "F1", "F2")


def boundary_data_constant(q: int) -> float:
    """Factor of C g^q in F2 for the entropy U^q / q."""
    return 0.5 * (q - 1) * q ** (-q / (q - 1)) * 3.0 ** (q / (q - 1)) * 2.0 ** ((q - 2) / (q - 1))


@dataclass
class EnergyReport:
    entropy: str
    q_power: int
    scale: float
    terms: Dict[str, np.ndarray] = field(default_factory=dict)
    dissipation: Optional[np.ndarray] = None
    final_energy: float = 0.0
    initial_energy: float = 0.0
    data_term: float = 0.0

    def total(self, name: str) -> float:
        return float(np.sum(self.terms[name]))

    @property
    def identity_residual(self) -> Optional[float]:
        """Closure defect of the quadratic energy identity; None for other entropies."""
        if self.q_power != 2:
            return None
        lhs = self.final_energy + float(np.sum(self.dissipation)) + self.data_term
        lhs += sum(self.total(name) for name in ("E0", "E1", "E2", "E3", "E4", "E5")) - self.total("F")
        return lhs - self.initial_energy

    def sign_checks(self, tol: Optional[float] = None) -> Dict[str, bool]:
        """E1 >= 0, E2 + E3 >= 0, E4 + E5 - F1 >= 0 on every slab, up to tol * scale."""
        tol = SIGN_TOL * self.scale if tol is None else tol
        return {
            "E1": bool(np.all(self.terms["E1"] >= -tol)),
            "E2+E3": bool(np.all(self.terms["E2"] + self.terms["E3"] >= -tol)),
            "E4+E5-F1": bool(np.all(self.terms["E4"] + self.terms["E5"] - self.terms["F1"] >= -tol)),
        }


def energy_terms(solution: DGSolution, entropy: EntropyPair, q_power: int = 2) -> EnergyReport:
    law = solution.law
    eta, eta_p, eta_pp = entropy.eta, entropy.eta_prime, entropy.eta_second
    num_slabs = solution.solved
    scale = 0.5 * solution.problem.u0_l2() ** 2 + 1.0
    report = EnergyReport(entropy=entropy.entropy.name, q_power=q_power, scale=scale)
    terms = {name: np.zeros(num_slabs) for name in TERMS}
    dissipation = np.zeros(num_slabs)
    data_term = 0.0
    f2_factor = boundary_data_constant(q_power)

    for n in range(num_slabs):
        system = SlabSystem(solution, n)
        F = system.fields(solution.coeffs[n])
        delta, eps_hat = system.frozen_coefficients()
        ws = system.w_space

        terms["E0"][n] = np.sum(system.wJ * delta * eta_pp(F.u) * F.L**2)
        powered = F.U ** (q_power - 1)
        dissipation[n] = np.sum(eps_hat * np.einsum("ci,cij,cj->c", F.U, system.K, powered))

        a, b = F.bottom, system.incoming
        terms["E1"][n] = np.sum(system.w_time * (eta(b) - eta(a) - eta_p(a) * (b - a)))

        a, b, C = F.right[:-1], F.right_other[:-1], F.right_terms.C[:-1]
        if a.size:
            flux_jump = law.flux(a) - law.flux(b)
            terms["E2"][n] = np.sum(ws * (entropy.q_difference(a, b) - flux_jump * 0.5 * (eta_p(a) + eta_p(b))))
            terms["E3"][n] = np.sum(ws * C * (a - b) * (eta_p(a) - eta_p(b)))

        for a, g, C, nx in (
            (F.left[0], system.g_left, F.left_terms.C[0], -1.0),
            (F.right[-1], system.g_right, F.right_terms.C[-1], 1.0),
        ):
            flux_jump = (law.flux(a) - law.flux(g)) * nx
            terms["E4"][n] += np.sum(ws * (entropy.q_difference(a, g) * nx - flux_jump * 0.5 * (eta_p(a) + eta_p(g))))
            terms["E5"][n] += np.sum(ws * C * (a - g) * (eta_p(a) - eta_p(g)))
            terms["F"][n] -= np.sum(ws * (0.5 * flux_jump + C * (a - g)) * eta_p(g))
            terms["F1"][n] += np.sum(ws * 0.5 * C * (eta_p(a) - eta_p(g)) * (a - g))
            terms["F2"][n] += np.sum(ws * f2_factor * C * np.abs(g) ** q_power)
            data_term += float(np.sum(ws * entropy.q_flux(g) * nx))

        if n == 0:
            report.initial_energy = float(np.sum(system.w_time * eta(system.incoming)))
        if n == num_slabs - 1:
            report.final_energy = float(np.sum(system.w_time * eta(F.top)))

    report.terms = terms
    report.dissipation = dissipation
    report.data_term = data_term
    residual = report.identity_residual
    if residual is not None and abs(residual) > IDENTITY_TOL * scale:
        logger.warning("energy identity closes only to %.3e (scale %.3g)", residual, scale)
    failed = [name for name, ok in report.sign_checks().items() if not ok]
    if failed:
        logger.warning("entropy %s: sign checks failed for %s", report.entropy, ", ".join(failed))
    return report
