import numpy as np
import pytest

from app.element.ReferenceElement import build_reference
from app.mesh.SpaceTimeMesh import build_mesh
from app.solver.DGSolution import DGSolution
from app.solver.SlabSolver import (
    MarchError,
    NewtonSettings,
    SlabSolveError,
    conservation_balance,
    initial_guess,
    march,
    solve_slab,
)
from app.solver.Stabilization import StabilizationConfig
from tests.support import constant_problem, riemann_problem, solve


@pytest.mark.parametrize(
    "kwargs,message",
    [
        ({"max_iter": 0}, "at least 1"),
        ({"max_outer": 0}, "at least 1"),
        ({"abs_tol": 0.0}, "positive"),
        ({"min_damping": 0.0}, "min_damping"),
        ({"min_damping": 1.5}, "min_damping"),
    ],
)
def test_newton_settings_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        NewtonSettings(**kwargs)


def test_constant_data_gives_constant_solution(constant_solution):
    np.testing.assert_allclose(constant_solution.coeffs, 0.5, atol=1e-12)
    assert constant_solution.solved == constant_solution.mesh.num_slabs
    assert all(report.newton_iterations == 0 for report in constant_solution.reports)


def test_every_slab_reports(burgers_riemann_solution):
    reports = burgers_riemann_solution.reports
    assert [report.slab for report in reports] == list(range(8))
    assert all(report.residual_norm <= 1e-10 for report in reports)


@pytest.mark.parametrize("fixture", ["burgers_riemann_solution", "burgers_sine_solution", "advection_sine_solution"])
def test_conservation_balance_per_slab(request, fixture):
    solution = request.getfixturevalue(fixture)
    for slab in range(solution.mesh.num_slabs):
        assert abs(conservation_balance(solution, slab)) < 1e-8


def test_march_is_causal(burgers_law, burgers_riemann_solution):
    # solving only the first slabs gives the same coefficients as the full march
    partial = DGSolution(
        burgers_riemann_solution.mesh, burgers_riemann_solution.ref, burgers_law, riemann_problem(), StabilizationConfig()
    )
    for slab in range(3):
        solve_slab(partial, slab)
    assert partial.solved == 3
    assert np.array_equal(partial.coeffs[:3], burgers_riemann_solution.coeffs[:3])
    assert np.all(partial.coeffs[3:] == 0.0)


def test_march_is_deterministic(burgers_law, burgers_riemann_solution):
    again = solve(riemann_problem(), burgers_law, p=1, cells=8, slabs=8)
    assert np.array_equal(again.coeffs, burgers_riemann_solution.coeffs)


def test_initial_guess_extends_incoming_trace(burgers_law):
    mesh = build_mesh((0.0, 1.0), 0.5, 4, 2)
    solution = DGSolution(mesh, build_reference(1), burgers_law, riemann_problem(), StabilizationConfig())
    np.testing.assert_allclose(initial_guess(solution, 0), [[1.0, 0.0, 1.0, 0.0]] + [[0.0] * 4] * 3)


def test_march_failure_keeps_partial_solution(burgers_law):
    with pytest.raises(MarchError) as info:
        solve(riemann_problem(), burgers_law, p=1, cells=8, slabs=4, newton=NewtonSettings(max_iter=1))
    error = info.value
    assert isinstance(error.cause, SlabSolveError)
    assert error.partial.solved == error.slab_index
    assert "march stopped at slab" in str(error)


def test_march_rejects_mismatched_domain(burgers_law):
    mesh = build_mesh((0.0, 2.0), 0.5, 4, 2)
    with pytest.raises(ValueError, match="differs from problem domain"):
        march(riemann_problem(), burgers_law, StabilizationConfig(), mesh, build_reference(1))


def test_march_rejects_mesh_past_final_time(burgers_law):
    mesh = build_mesh((0.0, 1.0), 1.0, 4, 2)
    with pytest.raises(ValueError, match="data only up to"):
        march(riemann_problem(T=0.5), burgers_law, StabilizationConfig(), mesh, build_reference(1))


def test_march_needs_space_time_element(burgers_law):
    mesh = build_mesh((0.0, 1.0), 0.5, 4, 2)
    with pytest.raises(ValueError, match="two-dimensional"):
        march(constant_problem(0.5), burgers_law, StabilizationConfig(), mesh, build_reference(1, dim=1))


def test_p0_solution_stays_within_data_bounds(burgers_riemann_p0_solution):
    coeffs = burgers_riemann_p0_solution.coeffs
    assert coeffs.min() >= -1e-10
    assert coeffs.max() <= 1.0 + 1e-10


def test_march_measures_C0_on_data_range(burgers_riemann_solution):
    # data in [0, 1], measured on |u| <= 2
    assert burgers_riemann_solution.law.C0 == pytest.approx(np.sqrt(5.0))


def test_march_rejects_flux_cap_below_local_coefficient(burgers_law):
    mesh = build_mesh((0.0, 1.0), 0.5, 4, 2)
    cfg = StabilizationConfig(C0_interior=0.1)
    with pytest.raises(ValueError, match="C0_interior = 0.1 is below the flux coefficient"):
        march(riemann_problem(), burgers_law, cfg, mesh, build_reference(1))


def test_march_with_admissible_cap_matches_uncapped(burgers_law, burgers_riemann_solution):
    capped = solve(riemann_problem(), burgers_law, p=1, cells=8, slabs=8, cfg=StabilizationConfig(C0_interior=1.5))
    np.testing.assert_array_equal(capped.coeffs, burgers_riemann_solution.coeffs)
