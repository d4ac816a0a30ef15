from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh


@dataclass(frozen=True, eq=False)
class AffineMap:
    """F_T(x_hat) = J x_hat + b from the reference cell onto an element."""

    J: np.ndarray
    b: np.ndarray
    det_J: float = field(init=False)

    def __post_init__(self):
        J = np.atleast_2d(np.asarray(self.J, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if J.shape[0] != J.shape[1] or b.shape != (J.shape[0],):
            raise ValueError(f"inconsistent affine map shapes J{J.shape} b{b.shape}")
        det = float(np.linalg.det(J))
        if not np.isfinite(det) or abs(det) <= 1e-14 * max(1.0, np.abs(J).max() ** J.shape[0]):
            raise ValueError(f"singular affine map, det(J) = {det:.3g}")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "det_J", abs(det))

    @classmethod
    def diagonal(cls, scales, offsets=None) -> "AffineMap":
        scales = np.asarray(scales, dtype=float)
        offsets = np.zeros_like(scales) if offsets is None else offsets
        return cls(J=np.diag(scales), b=np.asarray(offsets, dtype=float))

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    def to_physical(self, x_hat):
        return np.asarray(x_hat, dtype=float) @ self.J.T + self.b

    def transfer_gradient(self, grad_hat):
        """grad u(x) = J^{-T} grad_hat u_hat(x_hat); rows are points."""
        return np.linalg.solve(self.J.T, np.asarray(grad_hat, dtype=float).T).T

    @property
    def metric(self) -> np.ndarray:
        """K = (J^T J)^{-1}."""
        return np.linalg.inv(self.J.T @ self.J)

    def metric_decomposition(self):
        """Eigenpairs (mu_l, psi_l) of K, ascending."""
        return eigh(self.metric)

    @property
    def shape_constant(self) -> float:
        """||J|| ||J^{-1}|| in the spectral norm."""
        return float(np.linalg.norm(self.J, 2) * np.linalg.norm(np.linalg.inv(self.J), 2))
