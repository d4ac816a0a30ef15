"""Spatial numerical range of a symmetric matrix under the l^q norm.

For ||x||_q = 1 the functional realizing Hoelder equality is y_i = sign(x_i) |x_i|^(q-1),
so each sample of the range is the number x^T A y.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh

logger = logging.getLogger(__name__)

PSD_TOL = 1e-10


def _check_exponent(q: int):
    if q < 2 or q % 2:
        raise ValueError(f"q must be an even integer >= 2, got {q}")


def _check_symmetric(A: np.ndarray):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix must be symmetric")


def holder_pair(x_raw, q: int):
    """(x, y) with ||x||_q = 1, y = sign(x)|x|^(q-1), hence x^T y = ||y||_{q/(q-1)} = 1."""
    _check_exponent(q)
    x_raw = np.asarray(x_raw, dtype=float).ravel()
    norm = np.linalg.norm(x_raw, ord=q)
    if x_raw.size == 0 or norm == 0.0:
        raise ValueError("x_raw must be a nonzero vector")
    x = x_raw / norm
    y = np.sign(x) * np.abs(x) ** (q - 1)
    return x, y


@dataclass(frozen=True)
class NumericalRangeSample:
    matrix_dim: int
    q: int
    x: np.ndarray
    y: np.ndarray
    value: float

    @property
    def holder_defect(self) -> float:
        """max(|x^T y - 1|, | ||y||_{q'} - 1 |)."""
        dual = self.q / (self.q - 1)
        return float(max(abs(self.x @ self.y - 1.0), abs(np.linalg.norm(self.y, ord=dual) - 1.0)))


def range_sample(A, q: int, x_raw) -> NumericalRangeSample:
    A = np.asarray(A, dtype=float)
    _check_symmetric(A)
    x, y = holder_pair(x_raw, q)
    if x.size != A.shape[0]:
        raise ValueError(f"vector of length {x.size} does not match a {A.shape[0]}x{A.shape[0]} matrix")
    return NumericalRangeSample(matrix_dim=A.shape[0], q=q, x=x, y=y, value=float(x @ A @ y))


@dataclass(frozen=True)
class RangeInclusionReport:
    q: int
    trials: int
    max_value: float
    min_value: float
    lambda_max: float
    violations: int


def verify_range_inclusion(A, q: int, trials: int, seed: int = 0) -> RangeInclusionReport:
    """Sample W(A, ||.||_q) and count values outside [-1e-10, lambda_max + 1e-10]."""
    A = np.asarray(A, dtype=float)
    _check_symmetric(A)
    eigenvalues = eigvalsh(A)
    if eigenvalues[0] < -PSD_TOL:
        raise ValueError(f"matrix is not positive semidefinite: smallest eigenvalue {eigenvalues[0]:.6g}")
    lambda_max = float(max(eigenvalues[-1], 0.0))

    rng = np.random.default_rng(seed)
    values = np.empty(trials)
    for k in range(trials):
        x_raw = rng.standard_normal(A.shape[0])
        while not np.any(x_raw):
            x_raw = rng.standard_normal(A.shape[0])
        values[k] = range_sample(A, q, x_raw).value

    outside = (values < -PSD_TOL) | (values > lambda_max + PSD_TOL)
    report = RangeInclusionReport(
        q=q,
        trials=trials,
        max_value=float(values.max()) if trials else 0.0,
        min_value=float(values.min()) if trials else 0.0,
        lambda_max=lambda_max,
        violations=int(outside.sum()),
    )
    if report.violations:
        logger.warning("numerical range: %d of %d samples outside [0, %.6g]", report.violations, trials, lambda_max)
    return report
