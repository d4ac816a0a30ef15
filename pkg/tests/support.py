import numpy as np

from app.element.ReferenceElement import build_reference
from app.law.ProblemData import ProblemData
from app.mesh.SpaceTimeMesh import build_mesh
from app.solver.SlabSolver import march
from app.solver.Stabilization import StabilizationConfig


def constant_problem(c: float, T: float = 0.5) -> ProblemData:
    return ProblemData(
        u0=lambda x: np.full_like(np.asarray(x, dtype=float), c),
        g_D=lambda t, x: np.full(np.broadcast(np.asarray(t), np.asarray(x)).shape, c),
        domain=(0.0, 1.0),
        T_final=T,
    )


def riemann_problem(u_left: float = 1.0, u_right: float = 0.0, x0: float = 0.25, T: float = 0.5) -> ProblemData:
    def u0(x):
        return np.where(np.asarray(x, dtype=float) < x0, u_left, u_right)

    def g_D(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return u0(x)

    return ProblemData(u0=u0, g_D=g_D, domain=(0.0, 1.0), T_final=T)


def sine_problem(T: float = 0.25) -> ProblemData:
    return ProblemData(
        u0=lambda x: np.sin(2.0 * np.pi * np.asarray(x, dtype=float)),
        g_D=lambda t, x: np.zeros(np.broadcast(np.asarray(t), np.asarray(x)).shape),
        domain=(0.0, 1.0),
        T_final=T,
    )


def solve(problem, law, p=1, cells=8, slabs=8, cfg=None, newton=None):
    mesh = build_mesh(problem.domain, problem.T_final, cells, slabs)
    ref = build_reference(p, dim=2)
    return march(problem, law, cfg or StabilizationConfig(), mesh, ref, newton)


def config_text(law, scenario, cells, p, t_final=0.25, slabs=None, extra=""):
    slabs = cells if slabs is None else slabs
    return (
        f"law = {law}\nscenario = {scenario}\ncells = {cells}\nslabs = {slabs}\np = {p}\n"
        f"t_final = {t_final}\nq_list = 4\n{extra}"
    )
