"""Lagrange reference elements on [0, 1] and [0, 1]^2.

Nodes are equispaced (the cell midpoint for p = 0). In two dimensions the first
reference coordinate is time and the second is space; node k = a * (p + 1) + b sits
at (z_a, z_b) and the basis is the tensor product l_a(t) l_b(x).
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import eigh

from app.element.AffineMap import AffineMap
from app.util.quadrature import gauss_legendre, tensor_gauss_legendre

logger = logging.getLogger(__name__)

MAX_DEGREE = 4
FACE_SIDES = ("bottom", "top", "left", "right")


def lagrange_nodes_1d(p: int) -> np.ndarray:
    if p == 0:
        return np.array([0.5])
    return np.linspace(0.0, 1.0, p + 1)


def _lagrange_coefficients(nodes: np.ndarray):
    coeffs = []
    for i, zi in enumerate(nodes):
        others = np.delete(nodes, i)
        c = P.polyfromroots(others) if others.size else np.array([1.0])
        coeffs.append(c / P.polyval(zi, c))
    return coeffs


def sample_grid(dim: int, density: int) -> np.ndarray:
    s = np.linspace(0.0, 1.0, density)
    if dim == 1:
        return s[:, None]
    tt, xx = np.meshgrid(s, s, indexing="ij")
    return np.column_stack([tt.ravel(), xx.ravel()])


@dataclass(frozen=True, eq=False)
class ReferenceElement:
    p: int
    dim: int
    nodes: np.ndarray
    quad_points: np.ndarray
    quad_weights: np.ndarray
    phi: np.ndarray  # (n_dof, n_quad)
    grad_phi: np.ndarray  # (dim, n_dof, n_quad)
    A_hat: np.ndarray
    M_hat: np.ndarray
    A_directional: np.ndarray  # (dim, n_dof, n_dof)
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    lebesgue_const: float
    _coeffs_1d: Tuple[np.ndarray, ...] = field(repr=False)
    face_points_1d: Optional[np.ndarray] = None
    face_weights_1d: Optional[np.ndarray] = None
    face_phi: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def n_dof(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_quad_1d(self) -> int:
        return int(round(self.quad_weights.size ** (1.0 / self.dim)))

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if self.n_dof > 1 else 0.0

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def constant_vector(self) -> np.ndarray:
        return np.ones(self.n_dof)

    def tabulate_1d(self, s) -> Tuple[np.ndarray, np.ndarray]:
        """1-D factor values and derivatives (p + 1, npts) at points s in [0, 1]."""
        s = np.asarray(s, dtype=float)
        values = np.array([P.polyval(s, c) for c in self._coeffs_1d])
        derivs = np.array([P.polyval(s, P.polyder(c)) for c in self._coeffs_1d])
        return values, derivs

    def tabulate(self, points) -> Tuple[np.ndarray, np.ndarray]:
        """Basis values (n_dof, npts) and gradients (dim, n_dof, npts) at reference points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            pts = pts.T
        if self.dim == 1:
            values, derivs = self.tabulate_1d(pts[:, 0])
            return values, derivs[None, :, :]
        lt, dlt = self.tabulate_1d(pts[:, 0])
        lx, dlx = self.tabulate_1d(pts[:, 1])
        n1 = self.p + 1
        values = (lt[:, None, :] * lx[None, :, :]).reshape(n1 * n1, -1)
        grad_t = (dlt[:, None, :] * lx[None, :, :]).reshape(n1 * n1, -1)
        grad_x = (lt[:, None, :] * dlx[None, :, :]).reshape(n1 * n1, -1)
        return values, np.stack([grad_t, grad_x])

    def evaluate(self, coeffs, points) -> np.ndarray:
        values, _ = self.tabulate(points)
        return np.asarray(coeffs, dtype=float) @ values

    def integrate(self, values_at_quad) -> float:
        return float(np.sum(np.asarray(values_at_quad) * self.quad_weights))


def build_reference(p: int, dim: int = 2, n_quad: Optional[int] = None) -> ReferenceElement:
    """Lagrange element of degree p with (p + 2)-point Gauss-Legendre rules per axis."""
    if not isinstance(p, (int, np.integer)) or not 0 <= p <= MAX_DEGREE:
        raise ValueError(f"polynomial degree must lie in [0, {MAX_DEGREE}], got {p}")
    if dim not in (1, 2):
        raise ValueError(f"reference element dimension must be 1 or 2, got {dim}")
    n_quad = p + 2 if n_quad is None else n_quad

    z = lagrange_nodes_1d(p)
    coeffs_1d = tuple(_lagrange_coefficients(z))
    if dim == 1:
        nodes = z[:, None]
        quad_points, quad_weights = gauss_legendre(n_quad)
        quad_points = quad_points[:, None]
    else:
        tt, xx = np.meshgrid(z, z, indexing="ij")
        nodes = np.column_stack([tt.ravel(), xx.ravel()])
        quad_points, quad_weights = tensor_gauss_legendre(n_quad)

    proto = ReferenceElement(
        p=p, dim=dim, nodes=nodes, quad_points=quad_points, quad_weights=quad_weights,
        phi=np.empty(0), grad_phi=np.empty(0), A_hat=np.empty(0), M_hat=np.empty(0),
        A_directional=np.empty(0), eigenvalues=np.empty(0), eigenvectors=np.empty(0),
        lebesgue_const=0.0, _coeffs_1d=coeffs_1d,
    )
    phi, grad_phi = proto.tabulate(quad_points)
    w = quad_weights
    A_directional = np.einsum("din,djn,n->dij", grad_phi, grad_phi, w)
    A_hat = A_directional.sum(axis=0)
    A_hat = 0.5 * (A_hat + A_hat.T)
    M_hat = np.einsum("in,jn,n->ij", phi, phi, w)
    eigenvalues, eigenvectors = eigh(A_hat)
    eigenvalues = np.where(np.abs(eigenvalues) < 1e-13, 0.0, eigenvalues)

    dense, _ = proto.tabulate(sample_grid(dim, 2001 if dim == 1 else 161))
    lebesgue = float(np.abs(dense).sum(axis=0).max())

    face_points = face_weights = None
    face_phi = {}
    if dim == 2:
        face_points, face_weights = gauss_legendre(n_quad)
        zeros, ones = np.zeros_like(face_points), np.ones_like(face_points)
        layouts = {
            "bottom": (zeros, face_points),
            "top": (ones, face_points),
            "left": (face_points, zeros),
            "right": (face_points, ones),
        }
        for side, (t_hat, x_hat) in layouts.items():
            face_phi[side], _ = proto.tabulate(np.column_stack([t_hat, x_hat]))

    ref = ReferenceElement(
        p=p, dim=dim, nodes=nodes, quad_points=quad_points, quad_weights=quad_weights,
        phi=phi, grad_phi=grad_phi, A_hat=A_hat, M_hat=M_hat, A_directional=A_directional,
        eigenvalues=eigenvalues, eigenvectors=eigenvectors, lebesgue_const=lebesgue,
        _coeffs_1d=coeffs_1d, face_points_1d=face_points, face_weights_1d=face_weights,
        face_phi=face_phi,
    )
    logger.debug(
        "reference p=%d dim=%d: n_dof=%d lambda2=%.6g lambda_max=%.6g Lambda_p=%.6g",
        p, dim, ref.n_dof, ref.lambda2, ref.lambda_max, ref.lebesgue_const,
    )
    return ref


def interpolate(ref: ReferenceElement, g: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Nodal values (g(node_i))_i, i.e. the coefficients of the Lagrange interpolant."""
    values = np.asarray(g(ref.nodes), dtype=float).reshape(-1)
    if values.size == 1 and ref.n_dof > 1:
        values = np.full(ref.n_dof, values[0])
    if values.size != ref.n_dof:
        raise ValueError(f"interpolated function returned {values.size} values for {ref.n_dof} nodes")
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise ValueError(f"non-finite nodal value at node {ref.nodes[bad].tolist()}")
    return values


def stiffness_on_element(ref: ReferenceElement, amap: AffineMap) -> np.ndarray:
    """(int_T grad phi_j . grad phi_i) via the spectral decomposition of (J^T J)^{-1}."""
    if amap.dim != ref.dim:
        raise ValueError(f"map dimension {amap.dim} does not match element dimension {ref.dim}")
    mu, psi = amap.metric_decomposition()
    result = np.zeros((ref.n_dof, ref.n_dof))
    for l in range(ref.dim):
        directional = np.einsum("d,dnq->nq", psi[:, l], ref.grad_phi)
        result += mu[l] * np.einsum("iq,jq,q->ij", directional, directional, ref.quad_weights)
    return amap.det_J * result


def inverse_estimate_constant(ref: ReferenceElement, trials: int = 200, seed: int = 0) -> float:
    """Measured C in |T| max_T |grad v|^2 <= C int_T |grad v|^2 on the reference cell."""
    if ref.p < 1:
        raise ValueError("inverse estimate needs p >= 1")
    rng = np.random.default_rng(seed)
    _, grads = ref.tabulate(sample_grid(ref.dim, 401 if ref.dim == 1 else 61))
    worst = 0.0
    for _ in range(trials):
        v = rng.uniform(-1.0, 1.0, ref.n_dof)
        energy = float(v @ ref.A_hat @ v)
        if energy <= 1e-14:
            continue
        peak = float(np.max(np.sum(np.einsum("i,din->dn", v, grads) ** 2, axis=0)))
        worst = max(worst, peak / energy)
    return worst


def interpolation_error(ref: ReferenceElement, g: Callable, h: float, origin=None) -> float:
    """Sup-norm error of the Lagrange interpolant of g on the cell origin + [0, h]^dim."""
    origin = np.zeros(ref.dim) if origin is None else np.asarray(origin, dtype=float)
    amap = AffineMap.diagonal(np.full(ref.dim, h), origin)
    coeffs = interpolate(ref, lambda x_hat: g(amap.to_physical(x_hat)))
    samples = sample_grid(ref.dim, 201 if ref.dim == 1 else 41)
    exact = np.asarray(g(amap.to_physical(samples)), dtype=float)
    return float(np.max(np.abs(ref.evaluate(coeffs, samples) - exact)))
