"""Residual, Jacobian and residual indicator of the space-time DG scheme on one slab.

All quantities are vectorized over the cells of the slab. For the test function phi_i of
cell T the residual is

    int_T L(U) phi_i
  + int_{dT} (F^(U) - F(U+) . n) phi_i
  + int_T delta L(U) (phi_i,t + f'(U) phi_i,x)
  + eps_hat int_T grad U . grad phi_i

with L(U) = U_t + f'(U) U_x. On the bottom face the flux term reduces to (U+ - U-) phi_i,
on the top face it vanishes, so a slab only sees the trace left behind by its predecessor.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from app.solver.DGSolution import DGSolution
from app.solver.NumericalFlux import FaceFluxTerms, face_flux_terms
from app.solver.Stabilization import combine_indicator, shock_capturing_eps, streamline_delta

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlabFields:
    """U and its derived quantities at the quadrature points of one slab."""

    U: np.ndarray
    u: np.ndarray
    ux: np.ndarray
    fp: np.ndarray
    fpp: np.ndarray
    L: np.ndarray
    bottom: np.ndarray
    top: np.ndarray
    left: np.ndarray
    right: np.ndarray
    left_other: np.ndarray
    right_other: np.ndarray
    left_terms: FaceFluxTerms
    right_terms: FaceFluxTerms


class SlabSystem:
    def __init__(self, solution: DGSolution, slab: int, cfg=None):
        mesh, ref = solution.mesh, solution.ref
        if not 0 <= slab < mesh.num_slabs:
            raise ValueError(f"slab {slab} outside 0..{mesh.num_slabs - 1}")
        if slab > solution.solved:
            raise ValueError(f"slab {slab} needs slab {slab - 1} solved first")
        self.solution = solution
        self.slab = slab
        self.law = solution.law
        self.cfg = solution.cfg if cfg is None else cfg
        self.ref = ref
        self.p = ref.p
        self.num_cells = mesh.num_cells
        self.n_dof = ref.n_dof

        self.dt = float(mesh.dt[slab])
        self.dx = mesh.dx
        self.h_T = np.hypot(self.dt, self.dx)
        self.h = mesh.h
        self.t0 = float(mesh.time_levels[slab])

        self.phi = ref.phi
        self.gt = ref.grad_phi[0] / self.dt
        self.gx_ref = ref.grad_phi[1]
        self.wJ = ref.quad_weights[None, :] * self.dt * self.dx[:, None]
        self.phi_bottom = ref.face_phi["bottom"]
        self.phi_top = ref.face_phi["top"]
        self.phi_left = ref.face_phi["left"]
        self.phi_right = ref.face_phi["right"]
        s, wf = ref.face_points_1d, ref.face_weights_1d
        self.face_weights = wf
        self.w_space = wf * self.dt
        self.w_time = wf[None, :] * self.dx[:, None]
        self.face_times = self.t0 + s * self.dt

        problem = solution.problem
        self.g_left = problem.boundary_values(self.face_times, 0)
        self.g_right = problem.boundary_values(self.face_times, 1)
        self.incoming = solution.incoming_trace(slab)

        A_t, A_x = ref.A_directional
        self.K = (self.dx / self.dt)[:, None, None] * A_t + (self.dt / self.dx)[:, None, None] * A_x
        bottom_mass = np.einsum("if,jf,f->ij", self.phi_bottom, self.phi_bottom, wf)
        self.bottom_mass = self.dx[:, None, None] * bottom_mass

        self.left_boundary = np.zeros((self.num_cells, 1), dtype=bool)
        self.left_boundary[0] = True
        self.right_boundary = np.zeros((self.num_cells, 1), dtype=bool)
        self.right_boundary[-1] = True
        ii, jj = np.meshgrid(np.arange(self.n_dof), np.arange(self.n_dof), indexing="ij")
        self._block_i, self._block_j = ii, jj

    @property
    def size(self) -> int:
        return self.num_cells * self.n_dof

    def fields(self, U) -> SlabFields:
        U = np.asarray(U, dtype=float).reshape(self.num_cells, self.n_dof)
        u = U @ self.phi
        ux = (U @ self.gx_ref) / self.dx[:, None]
        fp = self.law.speed(u)
        fpp = self.law.f_second(u) * np.ones_like(u)
        L = U @ self.gt + fp * ux
        left, right = U @ self.phi_left, U @ self.phi_right
        right_other = np.vstack([left[1:], self.g_right[None, :]])
        left_other = np.vstack([self.g_left[None, :], right[:-1]])
        return SlabFields(
            U=U,
            u=u,
            ux=ux,
            fp=fp,
            fpp=fpp,
            L=L,
            bottom=U @ self.phi_bottom,
            top=U @ self.phi_top,
            left=left,
            right=right,
            left_other=left_other,
            right_other=right_other,
            left_terms=face_flux_terms(self.cfg, self.law, left, left_other, -1.0, self.left_boundary),
            right_terms=face_flux_terms(self.cfg, self.law, right, right_other, 1.0, self.right_boundary),
        )

    def residual(self, U, delta, eps_hat, fields: Optional[SlabFields] = None) -> np.ndarray:
        F = self.fields(U) if fields is None else fields
        res = (F.L * self.wJ) @ self.phi.T
        D = delta * F.L * self.wJ
        res += D @ self.gt.T + (D * F.fp / self.dx[:, None]) @ self.gx_ref.T
        res += eps_hat[:, None] * np.einsum("cij,cj->ci", self.K, F.U)
        res += ((F.bottom - self.incoming) * self.w_time) @ self.phi_bottom.T
        res += (F.right_terms.value * self.w_space) @ self.phi_right.T
        res += (F.left_terms.value * self.w_space) @ self.phi_left.T
        return res

    def jacobian(self, U, delta, eps_hat) -> sp.csc_matrix:
        F = self.fields(U)
        gx = self.gx_ref[None, :, :] / self.dx[:, None, None]
        test = self.gt[None, :, :] + F.fp[:, None, :] * gx
        dL = test + (F.fpp * F.ux)[:, None, :] * self.phi[None, :, :]

        diag = np.einsum("cq,iq,cjq->cij", self.wJ, self.phi, dL)
        diag += np.einsum("cq,ciq,cjq->cij", self.wJ * delta, test, dL)
        diag += np.einsum("cq,ciq,jq->cij", self.wJ * delta * F.L * F.fpp, gx, self.phi)
        diag += eps_hat[:, None, None] * self.K
        diag += self.bottom_mass
        diag += np.einsum("cf,if,jf->cij", F.right_terms.d_own * self.w_space, self.phi_right, self.phi_right)
        diag += np.einsum("cf,if,jf->cij", F.left_terms.d_own * self.w_space, self.phi_left, self.phi_left)
        upper = np.einsum("cf,if,jf->cij", (F.right_terms.d_other * self.w_space)[:-1], self.phi_right, self.phi_left)
        lower = np.einsum("cf,if,jf->cij", (F.left_terms.d_other * self.w_space)[1:], self.phi_left, self.phi_right)

        cells = np.arange(self.num_cells)
        blocks = [(diag, cells, cells), (upper, cells[:-1], cells[1:]), (lower, cells[1:], cells[:-1])]
        rows, cols, data = [], [], []
        for values, block_row, block_col in blocks:
            rows.append((block_row[:, None, None] * self.n_dof + self._block_i).ravel())
            cols.append((block_col[:, None, None] * self.n_dof + self._block_j).ravel())
            data.append(values.ravel())
        return sp.csc_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(self.size, self.size)
        )

    def indicator(self, U, fields: Optional[SlabFields] = None) -> np.ndarray:
        """R(U) per cell; maxima over quadrature points of T and of its faces in d*T."""
        F = self.fields(U) if fields is None else fields
        volume = np.abs(F.L).max(axis=1)
        time_jump = np.abs(F.bottom - self.incoming).max(axis=1)
        flux_jump = np.maximum.reduce(
            [
                time_jump,
                np.abs(self.law.flux(F.left) - self.law.flux(F.left_other)).max(axis=1),
                np.abs(self.law.flux(F.right) - self.law.flux(F.right_other)).max(axis=1),
            ]
        )
        state_jump = np.maximum.reduce(
            [
                0.5 * time_jump,
                (F.left_terms.C * np.abs(F.left - F.left_other)).max(axis=1),
                (F.right_terms.C * np.abs(F.right - F.right_other)).max(axis=1),
            ]
        )
        return combine_indicator(volume, flux_jump, state_jump, self.h_T)

    def coefficients(self, U) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(delta at quadrature points, eps_hat per cell, C_T at space-face points) for state U."""
        F = self.fields(U)
        delta = streamline_delta(self.cfg, self.law, F.u, self.h_T[:, None])
        eps_hat = shock_capturing_eps(self.cfg, self.indicator(U, F), self.h, self.p)
        C = np.concatenate([F.left_terms.C.ravel(), F.right_terms.C.ravel()])
        return delta, eps_hat, C

    def frozen_coefficients(self):
        """Stored coefficients of a solved slab, else the ones of its current state."""
        if self.solution.has_frozen_coefficients(self.slab):
            return self.solution.delta[self.slab], self.solution.eps_hat[self.slab]
        delta, eps_hat, _ = self.coefficients(self.solution.coeffs[self.slab])
        return delta, eps_hat


def assemble_slab_residual(solution: DGSolution, slab_index: int, cfg=None) -> np.ndarray:
    """Residual vector of slab slab_index, ordered cell-major, at the solution's coefficients."""
    system = SlabSystem(solution, slab_index, cfg)
    delta, eps_hat = system.frozen_coefficients()
    return system.residual(solution.coeffs[slab_index], delta, eps_hat).ravel()


def residual_indicator(solution: DGSolution, element: int) -> float:
    slab, cell = solution.mesh.element_slab(element), solution.mesh.element_cell(element)
    system = SlabSystem(solution, slab)
    return float(system.indicator(solution.coeffs[slab])[cell])


def stabilization_params(cfg, solution: DGSolution, element: int):
    """(delta at the element's quadrature points, eps_hat) evaluated at the current state."""
    slab, cell = solution.mesh.element_slab(element), solution.mesh.element_cell(element)
    system = SlabSystem(solution, slab, cfg)
    delta, eps_hat, _ = system.coefficients(solution.coeffs[slab])
    return delta[cell], float(eps_hat[cell])
