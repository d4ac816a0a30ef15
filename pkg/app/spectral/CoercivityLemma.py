"""Coercivity of the pairing (grad v, grad I_h^p(v^(q-1)))_T for Lagrange elements.

The nodal vector of I_h^p(v^(q-1)) is the elementwise power of v's nodal vector, so on the
reference cell the pairing is v^T A_hat v^(q-1). The checked inequality is

    (grad v, grad I(v^(q-1)))_T >= C * int_T |grad v|^2 * ||v||_{inf,T}^(q-2)

with C reported in two forms: the constant of the proof chain,
(n_dof * lambda_max / lambda_2 * Lambda_p * shape^2)^-1, and the variant where the
Lebesgue constant enters as Lambda_p^(q-2).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.linalg import eigh

from app.element.AffineMap import AffineMap
from app.element.ReferenceElement import ReferenceElement, sample_grid, stiffness_on_element

logger = logging.getLogger(__name__)

RATIO_TOL = 1e-10
NEAR_KERNEL_NOISE = 1e-3


def _check_pairing_inputs(ref: ReferenceElement, v, q: int) -> np.ndarray:
    if ref.p < 1:
        raise ValueError("the coercivity pairing needs p >= 1")
    if q < 2 or q % 2:
        raise ValueError(f"q must be an even integer >= 2, got {q}")
    v = np.asarray(v, dtype=float).ravel()
    if v.size != ref.n_dof:
        raise ValueError(f"nodal vector has {v.size} entries, element has {ref.n_dof} nodes")
    return v


def coercivity_pairing(ref: ReferenceElement, v_nodal, q: int) -> float:
    """v^T A_hat v^(q-1) on the reference cell."""
    v = _check_pairing_inputs(ref, v_nodal, q)
    return float(v @ ref.A_hat @ v ** (q - 1))


def quadrature_pairing(ref: ReferenceElement, v_nodal, q: int) -> float:
    """The same pairing by quadrature of grad v . grad I(v^(q-1)) over the reference cell."""
    v = _check_pairing_inputs(ref, v_nodal, q)
    grad_v = np.einsum("i,din->dn", v, ref.grad_phi)
    grad_w = np.einsum("i,din->dn", v ** (q - 1), ref.grad_phi)
    return float(np.sum(np.sum(grad_v * grad_w, axis=0) * ref.quad_weights))


def eigen_expansion_pairing(A, v, w) -> float:
    """sum_{i >= 2} lambda_i (v^T xi_i)(xi_i^T w); equals v^T A w when lambda_1 = 0."""
    eigenvalues, eigenvectors = eigh(np.asarray(A, dtype=float))
    coeff_v = eigenvectors.T @ np.asarray(v, dtype=float)
    coeff_w = eigenvectors.T @ np.asarray(w, dtype=float)
    return float(np.sum(eigenvalues[1:] * coeff_v[1:] * coeff_w[1:]))


@dataclass(frozen=True)
class LemmaCaseReport:
    q: int
    min_ratio: float
    C_check: float
    C_check_q: float
    trials_used: int
    intermediate_failures: int
    orthogonality_failures: int
    expansion_defect: float

    @property
    def holds(self) -> bool:
        return self.min_ratio >= self.C_check - RATIO_TOL

    @property
    def holds_q(self) -> bool:
        return self.min_ratio >= self.C_check_q - RATIO_TOL


@dataclass(frozen=True)
class LemmaReport:
    p: int
    dim: int
    n_dof: int
    lambda2: float
    lambda_max: float
    lebesgue_const: float
    shape_factor: float
    cases: Dict[int, LemmaCaseReport] = field(default_factory=dict)

    @property
    def min_ratio(self) -> float:
        return min(case.min_ratio for case in self.cases.values())

    @property
    def constant_bound(self) -> float:
        return next(iter(self.cases.values())).C_check

    def q_variation(self) -> float:
        """Relative spread of min_ratio across q."""
        ratios = np.array([case.min_ratio for case in self.cases.values()])
        return float((ratios.max() - ratios.min()) / ratios.max())

    def lines(self):
        for q, case in self.cases.items():
            yield (
                f"p={self.p} dim={self.dim} q={q} min_ratio={case.min_ratio:.6g} C_check={case.C_check:.6g} "
                f"C_check_q={case.C_check_q:.6g} lambda2={self.lambda2:.6g} lambda_max={self.lambda_max:.6g} "
                f"Lambda_p={self.lebesgue_const:.6g} n_dof={self.n_dof} "
                f"intermediate_failures={case.intermediate_failures} "
                f"orthogonality_failures={case.orthogonality_failures}"
            )


def _trial_vectors(ref: ReferenceElement, trials: int, seed: int) -> np.ndarray:
    """Uniform, mean-shifted and near-kernel nodal vectors from independent child streams."""
    uniform_ss, shifted_ss, kernel_ss = np.random.SeedSequence(seed).spawn(3)
    counts = [trials - 2 * (trials // 3), trials // 3, trials // 3]
    uniform = np.random.default_rng(uniform_ss).uniform(-1.0, 1.0, (counts[0], ref.n_dof))
    shifted = np.random.default_rng(shifted_ss).uniform(-1.0, 1.0, (counts[1], ref.n_dof))
    shifted -= shifted.mean(axis=1, keepdims=True)
    noise = np.random.default_rng(kernel_ss).uniform(-1.0, 1.0, (counts[2], ref.n_dof))
    near_kernel = 1.0 + NEAR_KERNEL_NOISE * noise
    return np.vstack([uniform, shifted, near_kernel])


def verify_lemma(
    ref: ReferenceElement,
    amap: Optional[AffineMap] = None,
    trials: int = 1000,
    q_list: Sequence[int] = (2, 4, 6, 8),
    seed: int = 0,
) -> LemmaReport:
    if ref.p < 1:
        raise ValueError("the coercivity lemma needs p >= 1")
    amap = AffineMap.diagonal(np.ones(ref.dim)) if amap is None else amap
    K = stiffness_on_element(ref, amap)
    shape_factor = amap.shape_constant**2
    dense, _ = ref.tabulate(sample_grid(ref.dim, 401 if ref.dim == 1 else 41))
    chain = ref.n_dof * ref.lambda_max / ref.lambda2 * shape_factor

    vectors = _trial_vectors(ref, trials, seed)
    energy = np.einsum("ki,ij,kj->k", vectors, K, vectors)
    scale = np.einsum("ki,ij,kj->k", vectors, ref.A_hat, vectors)
    usable = energy > 1e-14 * np.maximum(1.0, np.abs(vectors).max(axis=1) ** 2)
    sup_norm = np.abs(vectors @ dense).max(axis=1)

    report = LemmaReport(
        p=ref.p,
        dim=ref.dim,
        n_dof=ref.n_dof,
        lambda2=ref.lambda2,
        lambda_max=ref.lambda_max,
        lebesgue_const=ref.lebesgue_const,
        shape_factor=shape_factor,
    )
    for q in q_list:
        if q < 2 or q % 2:
            raise ValueError(f"q must be an even integer >= 2, got {q}")
        powered = vectors ** (q - 1)
        lhs = np.einsum("ki,ij,kj->k", vectors, K, powered)
        rhs = energy * sup_norm ** (q - 2)
        ratios = lhs[usable] / rhs[usable]

        reference_pairing = np.einsum("ki,ij,kj->k", vectors, ref.A_hat, powered)
        lower = ref.lambda2 * np.einsum("ki,ki->k", vectors, powered)
        intermediate = int(np.sum(usable & (reference_pairing < lower - RATIO_TOL * np.maximum(1.0, np.abs(lower)))))

        centered = vectors - vectors.mean(axis=1, keepdims=True)
        centered_power = centered ** (q - 1)
        mass = np.abs(centered_power.sum(axis=1))
        orthogonality = int(np.sum(usable & (mass > 1e-12 * np.maximum(1.0, np.abs(centered_power).sum(axis=1)))))

        expansion = np.array(
            [eigen_expansion_pairing(ref.A_hat, v, w) for v, w in zip(vectors[usable], powered[usable])]
        )
        defect = np.abs(expansion - reference_pairing[usable]) / np.maximum(1.0, scale[usable])
        case = LemmaCaseReport(
            q=q,
            min_ratio=float(ratios.min()) if ratios.size else float("nan"),
            C_check=1.0 / (chain * ref.lebesgue_const),
            C_check_q=1.0 / (chain * ref.lebesgue_const ** (q - 2)),
            trials_used=int(usable.sum()),
            intermediate_failures=intermediate,
            orthogonality_failures=orthogonality,
            expansion_defect=float(defect.max()) if defect.size else 0.0,
        )
        report.cases[q] = case
        if not case.holds_q:
            logger.warning("lemma p=%d q=%d: min ratio %.6g below %.6g", ref.p, q, case.min_ratio, case.C_check_q)
        logger.info(
            "lemma p=%d dim=%d q=%d: min_ratio=%.6g C_check=%.6g C_check_q=%.6g",
            ref.p, ref.dim, q, case.min_ratio, case.C_check, case.C_check_q,
        )
    return report
