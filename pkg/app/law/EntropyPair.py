import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import quad

from app.law.ConservationLaw import ConservationLaw

logger = logging.getLogger(__name__)

QUAD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class EntropyFunction:
    """A convex entropy together with its first two derivatives."""

    name: str
    eta: Callable
    eta_prime: Callable
    eta_second: Callable


def power_entropy(q: int) -> EntropyFunction:
    """eta(u) = u^q / q for even q >= 2."""
    if q < 2 or q % 2:
        raise ValueError(f"power entropy needs an even exponent >= 2, got {q}")
    return EntropyFunction(
        name=f"u^{q}/{q}",
        eta=lambda u: np.asarray(u, dtype=float) ** q / q,
        eta_prime=lambda u: np.asarray(u, dtype=float) ** (q - 1),
        eta_second=lambda u: (q - 1) * np.asarray(u, dtype=float) ** (q - 2),
    )


@dataclass(frozen=True)
class EntropyPair:
    """Entropy eta with flux q(u) = int_{reference_state}^u eta'(r) f'(r) dr."""

    law: ConservationLaw
    entropy: EntropyFunction
    reference_state: float

    def eta(self, u):
        return self.entropy.eta(u)

    def eta_prime(self, u):
        return self.entropy.eta_prime(u)

    def eta_second(self, u):
        return self.entropy.eta_second(u)

    def _integrand(self, r: float) -> float:
        return float(self.entropy.eta_prime(r) * self.law.speed(r))

    def q_flux(self, u):
        """Entropy flux; accepts scalars or arrays."""
        values = np.asarray(u, dtype=float)
        flat = [
            quad(self._integrand, self.reference_state, float(v), epsabs=QUAD_ABS_TOL, epsrel=0.0, limit=200)[0]
            for v in values.ravel()
        ]
        result = np.asarray(flat, dtype=float).reshape(values.shape)
        return float(result) if result.ndim == 0 else result

    def q_difference(self, upper, lower):
        """q(upper) - q(lower), independent of the reference state."""
        upper = np.asarray(upper, dtype=float)
        lower = np.broadcast_to(np.asarray(lower, dtype=float), upper.shape)
        flat = [
            quad(self._integrand, float(b), float(a), epsabs=QUAD_ABS_TOL, epsrel=0.0, limit=200)[0]
            for a, b in zip(upper.ravel(), lower.ravel())
        ]
        return np.asarray(flat, dtype=float).reshape(upper.shape)

    def compatibility_defect(self, states, eps: float = 1e-5) -> float:
        """max |q'(u) - eta'(u) f'(u)| by central differences of q."""
        u = np.asarray(states, dtype=float)
        dq = self.q_difference(u + eps, u - eps) / (2.0 * eps)
        return float(np.max(np.abs(dq - self.eta_prime(u) * self.law.speed(u))))


def entropy_flux_build(
    law: ConservationLaw,
    entropy: EntropyFunction,
    reference_state: float,
    state_range: Tuple[float, float] = (-2.0, 2.0),
    samples: int = 201,
) -> EntropyPair:
    """Pair an entropy with its flux; rejects entropies with eta'' < 0 on state_range."""
    lo, hi = state_range
    states = np.linspace(lo, hi, samples)
    curvature = np.asarray(entropy.eta_second(states), dtype=float)
    if np.any(curvature < 0.0):
        worst = int(np.argmin(curvature))
        raise ValueError(
            f"entropy {entropy.name} is not convex: eta''({states[worst]:.4g}) = {curvature[worst]:.4g}"
        )
    return EntropyPair(law=law, entropy=entropy, reference_state=float(reference_state))
