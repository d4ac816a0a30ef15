"""Scenario catalog: initial and boundary data for a RunConfig, with an exact solution where one is known."""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from app.diagnostics.Oracles import burgers_riemann, shock_speed, transport
from app.law.ConservationLaw import ConservationLaw
from app.law.ProblemData import ProblemData
from app.workflow.RunConfig import RunConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    name: str
    law: ConservationLaw
    problem: ProblemData
    exact: Optional[Callable] = None
    # level crossed by a single tracked discontinuity, and where it starts
    front_level: Optional[float] = None
    front_origin: Optional[float] = None
    front_speed: Optional[float] = None

    def front_position(self, t: float) -> Optional[float]:
        if self.front_speed is None:
            return None
        return self.front_origin + self.front_speed * t


def is_linear(law: ConservationLaw) -> bool:
    return law.name.startswith("advection")


def _constant_in_time(u0: Callable) -> Callable:
    def g_D(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return u0(x)

    return g_D


def constant(config: RunConfig, law: ConservationLaw) -> Scenario:
    c = config.value

    def u0(x):
        return np.full_like(np.asarray(x, dtype=float), c)

    problem = ProblemData(u0, _constant_in_time(u0), config.domain, config.t_final)
    return Scenario("constant", law, problem, exact=_constant_in_time(u0))


def riemann(config: RunConfig, law: ConservationLaw) -> Scenario:
    u_left, u_right, x0 = config.u_left, config.u_right, config.x0

    def u0(x):
        return np.where(np.asarray(x, dtype=float) < x0, u_left, u_right)

    problem = ProblemData(u0, _constant_in_time(u0), config.domain, config.t_final)
    if is_linear(law):
        a = float(law.speed(0.0))
        return Scenario("riemann", law, problem, transport(u0, a), 0.5 * (u_left + u_right), x0, a)
    if law.name == "burgers":
        exact = burgers_riemann(u_left, u_right, x0)
        if u_left > u_right:
            speed = shock_speed(law, u_left, u_right)
            return Scenario("riemann", law, problem, exact, 0.5 * (u_left + u_right), x0, speed)
        return Scenario("riemann", law, problem, exact)
    return Scenario("riemann", law, problem)


def sine(config: RunConfig, law: ConservationLaw) -> Scenario:
    amplitude, x_left = config.amplitude, config.x_left
    length = config.x_right - config.x_left

    def u0(x):
        return amplitude * np.sin(2.0 * np.pi * (np.asarray(x, dtype=float) - x_left) / length)

    if is_linear(law):
        exact = transport(u0, float(law.speed(0.0)))
        return Scenario("sine", law, ProblemData(u0, exact, config.domain, config.t_final), exact)

    def zero(t, x):
        return np.zeros(np.broadcast(np.asarray(t), np.asarray(x)).shape)

    return Scenario("sine", law, ProblemData(u0, zero, config.domain, config.t_final))


def piecewise(config: RunConfig, law: ConservationLaw) -> Scenario:
    breaks = np.asarray(config.breaks, dtype=float)
    values = np.asarray(config.values, dtype=float)

    def u0(x):
        return values[np.searchsorted(breaks, np.asarray(x, dtype=float), side="right")]

    problem = ProblemData(u0, _constant_in_time(u0), config.domain, config.t_final)
    exact = transport(u0, float(law.speed(0.0))) if is_linear(law) else None
    return Scenario("piecewise", law, problem, exact)


CATALOG = {"constant": constant, "riemann": riemann, "sine": sine, "piecewise": piecewise}


def build_scenario(config: RunConfig) -> Scenario:
    law = config.conservation_law()
    scenario = CATALOG[config.scenario](config, law)
    logger.info(
        "scenario %s for %s on [%g, %g], T=%g (exact solution %s)",
        scenario.name, law.name, *config.domain, config.t_final,
        "known" if scenario.exact is not None else "unknown",
    )
    return scenario
