"""Norm bounds, interpolation gaps and error measures of discrete solutions."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from app.law.ProblemData import ProblemData, bln_violation, default_k_grid
from app.solver.DGSolution import DGSolution
from app.solver.SlabSystem import SlabSystem
from app.util.quadrature import gauss_legendre

logger = logging.getLogger(__name__)

SLAB_SAMPLE_POINTS = 5
ERROR_POINTS = 10
GAP_FLAG_FACTOR = 10.0


def _spatial_rule(solution: DGSolution, q: float):
    """Per-cell Gauss rule exact for |U|^q when q is even."""
    order = int(np.ceil((solution.p * q + 1) / 2)) + 1 if np.isfinite(q) else solution.p + 2
    s, w = gauss_legendre(max(order, 2))
    x = solution.mesh.space_nodes[:-1, None] + solution.mesh.dx[:, None] * s[None, :]
    return x.ravel(), (solution.mesh.dx[:, None] * w[None, :]).ravel()


def _lq_norm(values: np.ndarray, weights: np.ndarray, q: float) -> float:
    if not np.isfinite(q):
        return float(np.abs(values).max())
    return float(np.sum(weights * np.abs(values) ** q) ** (1.0 / q))


def time_slice_norm(solution: DGSolution, t: float, q: float, side: str = "below") -> float:
    """||U(t, .)||_{0,q,Omega}; at a slab interface `side` selects the one-sided limit."""
    if not 0.0 <= t <= solution.mesh.T_final:
        raise ValueError(f"time {t} outside [0, {solution.mesh.T_final}]")
    x, w = _spatial_rule(solution, q)
    return _lq_norm(solution.time_slice(t, x, side), w, q)


def slab_sample_times(solution: DGSolution, slab: int):
    """(t, side) pairs: both slab endpoints as inner limits plus interior Gauss points."""
    t0, t1 = solution.mesh.time_levels[slab], solution.mesh.time_levels[slab + 1]
    s, _ = gauss_legendre(SLAB_SAMPLE_POINTS)
    return [(t0, "above")] + [(t0 + (t1 - t0) * si, "below") for si in s] + [(t1, "below")]


@dataclass
class SlabNorms:
    l2_sup: np.ndarray
    linf_max: np.ndarray
    lq_sup: Dict[int, np.ndarray] = field(default_factory=dict)


def slab_norms(solution: DGSolution, q_list: Sequence[int] = ()) -> SlabNorms:
    num_slabs = solution.solved
    norms = SlabNorms(l2_sup=np.zeros(num_slabs), linf_max=np.zeros(num_slabs))
    norms.lq_sup = {q: np.zeros(num_slabs) for q in q_list}
    for n in range(num_slabs):
        times = slab_sample_times(solution, n)
        norms.l2_sup[n] = max(time_slice_norm(solution, t, 2, side) for t, side in times)
        for q in q_list:
            norms.lq_sup[q][n] = max(time_slice_norm(solution, t, q, side) for t, side in times)
        quad_values = solution.coeffs[n] @ solution.ref.phi
        norms.linf_max[n] = max(np.abs(solution.coeffs[n]).max(), np.abs(quad_values).max())
    return norms


def stability_check_L2(solution: DGSolution, problem: ProblemData) -> float:
    """sup_t ||U(t)||_2 / (||u0||_2 + ||g_D||_{2,Sigma_T}); 0 for zero data."""
    data = problem.u0_l2() + problem.gD_l2()
    sup = float(slab_norms(solution).l2_sup.max(initial=0.0))
    if data == 0.0:
        return 0.0
    ratio = sup / data
    logger.info("L2 bound: sup_t ||U||_2 = %.6g, ratio %.6g (h=%.4g, p=%d)", sup, ratio, solution.mesh.h, solution.p)
    return ratio


@dataclass(frozen=True)
class BoundednessReport:
    max_abs: float
    lq_sup: Dict[int, float]
    ratio: float
    data_bound: float
    q_scaling: Dict[int, float]

    @property
    def within_data_bound(self) -> bool:
        """max |U| <= ||u0||_inf + ||g_D||_inf, the discrete maximum principle expected for p = 0."""
        return self.max_abs <= self.data_bound + 1e-8


def boundedness_check_Linf(solution: DGSolution, problem: ProblemData, q_list: Sequence[int] = (4, 6)) -> BoundednessReport:
    norms = slab_norms(solution, q_list)
    max_abs = float(norms.linf_max.max(initial=0.0))
    lq_sup = {q: float(norms.lq_sup[q].max(initial=0.0)) for q in q_list}
    data_bound = problem.u0_sup + problem.gD_sup
    h = solution.mesh.h
    # measured max |U| against the inverse-inequality prediction (q / h)^(1/q) sup_t ||U||_q
    q_scaling = {
        q: (max_abs / ((q / h) ** (1.0 / q) * lq_sup[q]) if lq_sup[q] > 0.0 else 0.0) for q in q_list
    }
    report = BoundednessReport(
        max_abs=max_abs,
        lq_sup=lq_sup,
        ratio=max_abs / (data_bound + 1.0),
        data_bound=data_bound,
        q_scaling=q_scaling,
    )
    logger.info("Linf bound: max |U| = %.6g, ratio %.6g", max_abs, report.ratio)
    return report


@dataclass(frozen=True)
class GapReport:
    q_power: int
    gap: np.ndarray
    majorant: np.ndarray

    @property
    def flagged(self) -> int:
        return int(np.sum(np.abs(self.gap) > GAP_FLAG_FACTOR * self.majorant))

    @property
    def ratio(self) -> float:
        return float(np.max(np.abs(self.gap) / self.majorant, initial=0.0))


def interpolation_gap(solution: DGSolution, q_power: int) -> GapReport:
    """b(U, U^(q-1)) - b(U, I(U^(q-1))) element by element, next to its shock-capturing majorant."""
    if q_power < 2 or q_power % 2:
        raise ValueError(f"q_power must be an even integer >= 2, got {q_power}")
    shape = (solution.solved, solution.mesh.num_cells)
    gap, majorant = np.zeros(shape), np.zeros(shape)
    ref, law, q, p = solution.ref, solution.law, q_power, solution.p
    beta = solution.cfg.beta
    for n in range(solution.solved):
        system = SlabSystem(solution, n)
        F = system.fields(solution.coeffs[n])
        delta, _ = system.frozen_coefficients()
        interp = F.U ** (q - 1)
        h_T = system.h_T
        pairing = np.einsum("ci,cij,cj->c", F.U, system.K, interp)
        majorant[n] = q ** (p + 1) * h_T**2 * system.indicator(F.U, F) * np.abs(pairing) + h_T**beta * q ** (p + 1)
        if p == 0:
            continue

        ut = F.U @ system.gt
        w = F.u ** (q - 1) - interp @ ref.phi
        w_t = (q - 1) * F.u ** (q - 2) * ut - interp @ system.gt
        w_x = (q - 1) * F.u ** (q - 2) * F.ux - (interp @ system.gx_ref) / system.dx[:, None]
        A1 = np.sum(system.wJ * F.L * w, axis=1)
        A2 = np.sum(system.wJ * delta * F.L * (w_t + F.fp * w_x), axis=1)

        def face_w(trace, phi_face):
            return trace ** (q - 1) - interp @ phi_face

        # time faces: C_T = 1/2 splits (U+ - U-) evenly between the two parts
        half = 0.5 * np.sum(system.w_time * (F.bottom - system.incoming) * face_w(F.bottom, system.phi_bottom), axis=1)
        A3, A4 = half.copy(), half.copy()
        for own, other, terms, phi_face, nx in (
            (F.left, F.left_other, F.left_terms, system.phi_left, -1.0),
            (F.right, F.right_other, F.right_terms, system.phi_right, 1.0),
        ):
            w_f = face_w(own, phi_face)
            A3 += np.sum(system.w_space * 0.5 * (law.flux(other) - law.flux(own)) * nx * w_f, axis=1)
            A4 += np.sum(system.w_space * terms.C * (own - other) * w_f, axis=1)
        gap[n] = A1 + A2 + A3 + A4
    report = GapReport(q_power=q, gap=gap, majorant=majorant)
    if report.flagged:
        logger.warning("interpolation gap q=%d exceeds %gx its majorant on %d elements", q, GAP_FLAG_FACTOR, report.flagged)
    return report


@dataclass(frozen=True)
class InterfaceJump:
    time: float
    norm_jump: float
    l2_jump: float


def interface_jumps(solution: DGSolution, q: int = 2) -> List[InterfaceJump]:
    """At each slab bottom: | ||U(t_n^-)||_q^q - ||U(t_n^+)||_q^q | and ||[[U]]||_{0,2,Omega}."""
    s, w = gauss_legendre(int(np.ceil((solution.p * max(q, 2) + 1) / 2)) + 1)
    weights = solution.mesh.dx[:, None] * w[None, :]
    jumps = []
    for n in range(solution.solved):
        below = solution.incoming_trace(n, s)
        above = solution.bottom_trace(n, s)
        norm_jump = abs(np.sum(weights * np.abs(below) ** q) - np.sum(weights * np.abs(above) ** q))
        l2_jump = float(np.sqrt(np.sum(weights * (above - below) ** 2)))
        jumps.append(InterfaceJump(float(solution.mesh.time_levels[n]), float(norm_jump), l2_jump))
    return jumps


def error_norm(solution: DGSolution, exact: Callable, t: float, q: int = 2) -> float:
    """||U(t) - u(t)||_{0,q,Omega} against an exact solution u(t, x), q = 1 or 2."""
    if q not in (1, 2):
        raise ValueError(f"error norms are available for q = 1 or 2, got {q}")
    s, w = gauss_legendre(ERROR_POINTS)
    x = (solution.mesh.space_nodes[:-1, None] + solution.mesh.dx[:, None] * s[None, :]).ravel()
    weights = (solution.mesh.dx[:, None] * w[None, :]).ravel()
    difference = solution.time_slice(t, x) - np.asarray(exact(np.full_like(x, t), x), dtype=float)
    return _lq_norm(difference, weights, q)


def shock_position(solution: DGSolution, level: float, t: Optional[float] = None) -> float:
    """First x where U(t, .) crosses `level`, by linear interpolation of a fine sampling."""
    t = solution.mesh.T_final if t is None else t
    x = np.linspace(*solution.mesh.domain, ERROR_POINTS * solution.mesh.num_cells + 1)
    values = solution.time_slice(t, x) - level
    crossing = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0.0)
    if crossing.size == 0:
        raise ValueError(f"U({t}, .) does not cross level {level}")
    k = crossing[0]
    if values[k] == values[k + 1]:
        return float(x[k])
    return float(x[k] + (x[k + 1] - x[k]) * values[k] / (values[k] - values[k + 1]))


def observed_orders(hs: Sequence[float], errors: Sequence[float]) -> List[float]:
    """log-log slopes between consecutive refinement levels."""
    hs, errors = np.asarray(hs, dtype=float), np.asarray(errors, dtype=float)
    if hs.size != errors.size:
        raise ValueError("need one error per mesh size")
    return [float(np.log(errors[k] / errors[k + 1]) / np.log(hs[k] / hs[k + 1])) for k in range(hs.size - 1)]


@dataclass(frozen=True)
class BLNReport:
    max_violation: float
    time: float
    side: str


def boundary_bln_report(solution: DGSolution, k_points: int = 201) -> BLNReport:
    """BLN boundary inequality at every boundary-face quadrature point; report only."""
    law = solution.law
    worst = BLNReport(0.0, 0.0, "left")
    for n in range(solution.solved):
        system = SlabSystem(solution, n)
        F = system.fields(solution.coeffs[n])
        for side, traces, data, nx in (("left", F.left[0], system.g_left, -1.0), ("right", F.right[-1], system.g_right, 1.0)):
            for t, u, g in zip(system.face_times, traces, data):
                violation = bln_violation(law, u, g, nx, default_k_grid(u, g, points=k_points))
                if violation > worst.max_violation:
                    worst = BLNReport(violation, float(t), side)
    if worst.max_violation > 0.0:
        logger.warning("BLN condition violated by %.3e at t=%.4g (%s boundary)", worst.max_violation, worst.time, worst.side)
    return worst
