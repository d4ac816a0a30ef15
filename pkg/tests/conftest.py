import numpy as np
import pytest

from app.law.ConservationLaw import advection, burgers
from app.law.ProblemData import ProblemData
from tests.support import constant_problem, riemann_problem, sine_problem, solve


@pytest.fixture(scope="session")
def burgers_law():
    return burgers()


@pytest.fixture(scope="session")
def advection_law():
    return advection(1.0)


@pytest.fixture(scope="session")
def burgers_riemann_solution(burgers_law):
    return solve(riemann_problem(), burgers_law, p=1, cells=8, slabs=8)


@pytest.fixture(scope="session")
def burgers_riemann_p0_solution(burgers_law):
    return solve(riemann_problem(), burgers_law, p=0, cells=16, slabs=16)


@pytest.fixture(scope="session")
def burgers_sine_solution(burgers_law):
    return solve(sine_problem(), burgers_law, p=1, cells=8, slabs=4)


@pytest.fixture(scope="session")
def constant_solution(burgers_law):
    return solve(constant_problem(0.5), burgers_law, p=1, cells=4, slabs=3)


@pytest.fixture(scope="session")
def advection_sine_solution(advection_law):
    def exact(t, x):
        return np.sin(2.0 * np.pi * (np.asarray(x, dtype=float) - np.asarray(t, dtype=float)))

    problem = ProblemData(u0=lambda x: exact(0.0, x), g_D=exact, domain=(0.0, 1.0), T_final=0.25)
    return solve(problem, advection_law, p=1, cells=8, slabs=4)
