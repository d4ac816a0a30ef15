"""Exact solutions used as references: linear transport and Burgers Riemann problems."""
from typing import Callable

import numpy as np

from app.law.ConservationLaw import ConservationLaw


def shock_speed(law: ConservationLaw, u_left: float, u_right: float) -> float:
    """Rankine-Hugoniot speed (f(u_L) - f(u_R)) / (u_L - u_R)."""
    if u_left == u_right:
        return float(law.speed(u_left))
    return float((law.flux(u_left) - law.flux(u_right)) / (u_left - u_right))


def transport(u0: Callable, a: float) -> Callable:
    """u(t, x) = u0(x - a t)."""

    def exact(t, x):
        return u0(np.asarray(x, dtype=float) - a * np.asarray(t, dtype=float))

    return exact


def burgers_riemann(u_left: float, u_right: float, x0: float) -> Callable:
    """Entropy solution of Burgers' equation for a jump at x0: shock if u_L > u_R, else a fan."""

    def exact(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        if u_left > u_right:
            front = x0 + 0.5 * (u_left + u_right) * t
            return np.where(x < front, u_left, u_right)
        with np.errstate(divide="ignore", invalid="ignore"):
            fan = np.where(t > 0.0, (x - x0) / t, u_left)
        return np.where(x <= x0 + u_left * t, u_left, np.where(x >= x0 + u_right * t, u_right, fan))

    return exact
