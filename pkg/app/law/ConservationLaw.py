import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

ScalarMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ConservationLaw:
    """Scalar law u_t + f(u)_x = 0 written as div F(u) = 0 with F = (u, f(u)).

    All callables act elementwise on numpy arrays.
    """

    name: str
    f: ScalarMap
    f_prime: ScalarMap
    f_second: ScalarMap
    C0: Optional[float] = None
    # roots of f', where the flux changes monotonicity
    sonic_points: Tuple[float, ...] = ()
    # roots of f'', where |f'| can peak inside an interval
    speed_extrema: Tuple[float, ...] = ()

    def flux(self, u):
        return self.f(np.asarray(u, dtype=float))

    def speed(self, u):
        return self.f_prime(np.asarray(u, dtype=float))

    def flux_derivative_norm(self, u):
        """Euclidean norm of F'(u) = (1, f'(u))."""
        return np.hypot(1.0, self.speed(u))

    def speed_sup(self, a, b) -> np.ndarray:
        """sup |f'| on [min(a, b), max(a, b)]; |f'| peaks at an endpoint or a speed extremum."""
        a = np.asarray(a, dtype=float)
        b = np.broadcast_to(np.asarray(b, dtype=float), a.shape)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        candidates = [lo, hi] + [np.clip(s, lo, hi) for s in self.speed_extrema]
        return np.max(np.abs(self.speed(np.stack(candidates))), axis=0)

    def estimate_C0(self, bound: float) -> float:
        """sup ||F'(u)|| over |u| <= bound."""
        if not np.isfinite(bound) or bound <= 0.0:
            raise ValueError(f"state bound must be positive and finite, got {bound}")
        return float(np.hypot(1.0, self.speed_sup(-bound, bound)))

    def with_C0(self, bound: float) -> "ConservationLaw":
        """Copy of the law with C0 measured on [-bound, bound]."""
        C0 = self.estimate_C0(bound)
        logger.debug("law %s: C0=%.6g on [-%.4g, %.4g]", self.name, C0, bound, bound)
        return replace(self, C0=C0)

    def verify_derivatives(self, states, eps: float = 1e-6) -> Tuple[float, float]:
        """Worst relative finite-difference mismatch of f_prime and f_second."""
        u = np.asarray(states, dtype=float)
        fd1 = (self.f(u + eps) - self.f(u - eps)) / (2.0 * eps)
        fd2 = (self.f_prime(u + eps) - self.f_prime(u - eps)) / (2.0 * eps)
        err1 = np.abs(fd1 - self.f_prime(u)) / np.maximum(1.0, np.abs(fd1))
        err2 = np.abs(fd2 - self.f_second(u)) / np.maximum(1.0, np.abs(fd2))
        return float(err1.max()), float(err2.max())

    @property
    def vanishes_at_zero(self) -> bool:
        return abs(float(self.f(np.array(0.0)))) == 0.0


def space_time_flux(law: ConservationLaw, u: float) -> np.ndarray:
    """F(u) = (u, f(u)); the first component is the time flux."""
    return np.array([float(u), float(law.flux(u))])


def burgers() -> ConservationLaw:
    return ConservationLaw(
        name="burgers",
        f=lambda u: 0.5 * u * u,
        f_prime=lambda u: u,
        f_second=lambda u: np.ones_like(u, dtype=float),
        sonic_points=(0.0,),
    )


def advection(a: float) -> ConservationLaw:
    return ConservationLaw(
        name=f"advection:{a:g}",
        f=lambda u: a * u,
        f_prime=lambda u: np.full_like(u, a, dtype=float),
        f_second=lambda u: np.zeros_like(u, dtype=float),
    )


def buckley_leverett() -> ConservationLaw:
    # f = u^2 / D with D = u^2 + (1 - u)^2 / 2
    def denom(u):
        return u * u + 0.5 * (1.0 - u) ** 2

    def f(u):
        return u * u / denom(u)

    def f_prime(u):
        D = denom(u)
        dD = 3.0 * u - 1.0
        return (2.0 * u * D - u * u * dD) / D**2

    def f_second(u):
        D = denom(u)
        dD = 3.0 * u - 1.0
        N = 2.0 * u * D - u * u * dD
        dN = 2.0 * D - 3.0 * u * u
        return (dN * D - 2.0 * N * dD) / D**3

    # f'' vanishes where 6u^3 - 9u^2 + 1 does
    inflections = tuple(sorted(float(r.real) for r in np.roots([6.0, -9.0, 0.0, 1.0]) if abs(r.imag) < 1e-12))

    return ConservationLaw(
        name="buckley_leverett",
        f=f,
        f_prime=f_prime,
        f_second=f_second,
        sonic_points=(0.0, 1.0),
        speed_extrema=inflections,
    )


def law_from_name(name: str) -> ConservationLaw:
    """Catalog lookup: "burgers", "advection:a" (a defaults to 1), "buckley_leverett"."""
    key = name.strip().lower()
    if key == "burgers":
        return burgers()
    if key == "buckley_leverett":
        return buckley_leverett()
    if key == "advection" or key.startswith("advection:"):
        _, _, speed = key.partition(":")
        try:
            a = float(speed) if speed else 1.0
        except ValueError:
            raise ValueError(f"advection speed must be a number, got '{speed}'") from None
        return advection(a)
    raise ValueError(f"unknown law '{name}'; expected burgers, advection:a or buckley_leverett")
