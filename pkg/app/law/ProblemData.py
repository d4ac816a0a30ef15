import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

from app.law.ConservationLaw import ConservationLaw
from app.util.quadrature import gauss_legendre

logger = logging.getLogger(__name__)

SAMPLES = 2001


def _composite_rule(a: float, b: float, pieces: int = 512, order: int = 4):
    s, w = gauss_legendre(order)
    edges = np.linspace(a, b, pieces + 1)
    width = np.diff(edges)
    points = (edges[:-1, None] + width[:, None] * s[None, :]).ravel()
    weights = (width[:, None] * w[None, :]).ravel()
    return points, weights


@dataclass(frozen=True)
class ProblemData:
    """Initial datum u0 on [x_left, x_right] and boundary datum g_D(t, x) on Sigma_T."""

    u0: Callable[[np.ndarray], np.ndarray]
    g_D: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: Tuple[float, float]
    T_final: float
    _sup: Tuple[float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        x_left, x_right = self.domain
        if not x_left < x_right:
            raise ValueError(f"degenerate domain [{x_left}, {x_right}]")
        if not self.T_final > 0.0:
            raise ValueError(f"T_final must be positive, got {self.T_final}")
        xs = np.linspace(x_left, x_right, SAMPLES)
        ts = np.linspace(0.0, self.T_final, SAMPLES)
        u0_values = np.asarray(self.u0(xs), dtype=float)
        g_values = np.concatenate([self.boundary_values(ts, side) for side in (0, 1)])
        if not (np.all(np.isfinite(u0_values)) and np.all(np.isfinite(g_values))):
            raise ValueError("initial or boundary datum is not bounded on the sample grid")
        object.__setattr__(self, "_sup", (float(np.abs(u0_values).max()), float(np.abs(g_values).max())))

    def boundary_point(self, side: int) -> float:
        return self.domain[0] if side == 0 else self.domain[1]

    def boundary_values(self, t, side: int) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = np.full_like(t, self.boundary_point(side))
        return np.asarray(self.g_D(t, x), dtype=float) * np.ones_like(t)

    @property
    def u0_sup(self) -> float:
        return self._sup[0]

    @property
    def gD_sup(self) -> float:
        return self._sup[1]

    def state_bound(self) -> float:
        """max(|u0|_inf, |g_D|_inf) + 1, the range on which C0 is measured."""
        return max(self.u0_sup, self.gD_sup) + 1.0

    def u0_l2(self) -> float:
        x, w = _composite_rule(*self.domain)
        return float(np.sqrt(np.sum(w * np.asarray(self.u0(x), dtype=float) ** 2)))

    def gD_l2(self) -> float:
        """L2 norm on Sigma_T, the boundary Gamma carrying counting measure."""
        t, w = _composite_rule(0.0, self.T_final)
        total = sum(np.sum(w * self.boundary_values(t, side) ** 2) for side in (0, 1))
        return float(np.sqrt(total))


def bln_violation(
    law: ConservationLaw,
    trace_u: float,
    g: float,
    normal_f_component: float,
    k_grid: Sequence[float],
) -> float:
    """Largest negative part of (sign(u-k) - sign(g-k)) (f(u) - f(k)) n over k_grid."""
    k = np.asarray(k_grid, dtype=float).ravel()
    if k.size == 0:
        raise ValueError("k_grid must not be empty")
    factor = np.sign(trace_u - k) - np.sign(g - k)
    value = factor * (law.flux(trace_u) - law.flux(k)) * normal_f_component
    return float(np.max(np.maximum(0.0, -value)))


def default_k_grid(trace_u: float, g: float, margin: float = 0.5, points: int = 201) -> np.ndarray:
    lo = min(trace_u, g) - margin
    hi = max(trace_u, g) + margin
    return np.linspace(lo, hi, points)
