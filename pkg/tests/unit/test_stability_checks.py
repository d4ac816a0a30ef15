import numpy as np
import pytest

from app.diagnostics.Oracles import burgers_riemann
from app.diagnostics.StabilityChecks import (
    boundary_bln_report,
    boundedness_check_Linf,
    error_norm,
    interface_jumps,
    interpolation_gap,
    observed_orders,
    shock_position,
    slab_norms,
    stability_check_L2,
    time_slice_norm,
)
from app.element.ReferenceElement import build_reference
from app.mesh.SpaceTimeMesh import build_mesh
from app.solver.DGSolution import DGSolution
from tests.support import constant_problem, riemann_problem


@pytest.mark.parametrize("q", [2, 4, np.inf])
def test_time_slice_norm_constant(constant_solution, q):
    assert time_slice_norm(constant_solution, 0.2, q) == pytest.approx(0.5)


def test_time_slice_norm_outside_time_range(constant_solution):
    with pytest.raises(ValueError, match="outside"):
        time_slice_norm(constant_solution, 1.0, 2)


@pytest.mark.parametrize("q,expected", [(2, 1.0 / np.sqrt(3.0)), (4, 0.2**0.25)])
def test_time_slice_norm_of_linear_profile(q, expected):
    # U(t, x) = x is exact in Q_1
    mesh = build_mesh((0.0, 1.0), 0.5, 4, 2)
    ref = build_reference(1)
    solution = DGSolution(mesh, ref)
    U = mesh.space_nodes[:-1, None] + mesh.dx[:, None] * ref.nodes[None, :, 1]
    for slab in range(mesh.num_slabs):
        solution.store_slab(slab, U, solution.delta[slab], solution.eps_hat[slab])
    for t in (0.1, 0.4):
        assert time_slice_norm(solution, t, q) == pytest.approx(expected, rel=1e-12)


def test_slab_norms_constant(constant_solution):
    norms = slab_norms(constant_solution, (4,))
    np.testing.assert_allclose(norms.l2_sup, 0.5)
    np.testing.assert_allclose(norms.linf_max, 0.5)
    np.testing.assert_allclose(norms.lq_sup[4], 0.5)


def test_stability_check_L2_constant(constant_solution):
    # ||u0||_2 = 0.5 and ||g_D||_{2,Sigma_T} = sqrt(2 * 0.5 * 0.25) = 0.5
    assert stability_check_L2(constant_solution, constant_problem(0.5)) == pytest.approx(0.5, rel=1e-8)


def test_stability_check_L2_riemann_is_bounded(burgers_riemann_solution):
    assert stability_check_L2(burgers_riemann_solution, riemann_problem()) < 2.0


def test_p0_maximum_principle(burgers_riemann_p0_solution):
    report = boundedness_check_Linf(burgers_riemann_p0_solution, riemann_problem(), (4, 6))
    assert report.within_data_bound
    assert report.data_bound == pytest.approx(2.0)
    assert report.ratio == pytest.approx(report.max_abs / 3.0)
    assert set(report.q_scaling) == {4, 6}


def test_interpolation_gap_vanishes_for_p0(burgers_riemann_p0_solution):
    report = interpolation_gap(burgers_riemann_p0_solution, 4)
    assert np.all(report.gap == 0.0)
    assert np.all(report.majorant > 0.0)


def test_interpolation_gap_vanishes_for_quadratic_entropy(burgers_riemann_solution):
    np.testing.assert_allclose(interpolation_gap(burgers_riemann_solution, 2).gap, 0.0, atol=1e-12)


def test_interpolation_gap_q4_reported(burgers_riemann_solution):
    report = interpolation_gap(burgers_riemann_solution, 4)
    assert report.gap.shape == (8, 8)
    assert report.ratio >= 0.0


@pytest.mark.parametrize("q", [3, 0])
def test_interpolation_gap_rejects_odd_power(burgers_riemann_solution, q):
    with pytest.raises(ValueError, match="even integer"):
        interpolation_gap(burgers_riemann_solution, q)


def test_interface_jumps_one_per_slab(burgers_riemann_solution):
    jumps = interface_jumps(burgers_riemann_solution)
    assert len(jumps) == 8
    assert jumps[0].time == 0.0
    assert all(jump.l2_jump >= 0.0 for jump in jumps)


def test_interface_jumps_constant_are_zero(constant_solution):
    assert all(jump.l2_jump == pytest.approx(0.0, abs=1e-12) for jump in interface_jumps(constant_solution))


def test_error_norm_constant(constant_solution):
    assert error_norm(constant_solution, lambda t, x: np.full_like(x, 0.5), 0.5) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError, match="q = 1 or 2"):
        error_norm(constant_solution, lambda t, x: x, 0.5, q=3)


def test_riemann_l1_error_is_moderate(burgers_riemann_solution):
    assert error_norm(burgers_riemann_solution, burgers_riemann(1.0, 0.0, 0.25), 0.5, q=1) < 0.15


def test_shock_position_near_rankine_hugoniot_front(burgers_riemann_solution):
    # front at 0.25 + 0.5 * 0.5
    assert shock_position(burgers_riemann_solution, 0.5) == pytest.approx(0.5, abs=0.125)


def test_shock_position_without_crossing(constant_solution):
    with pytest.raises(ValueError, match="does not cross"):
        shock_position(constant_solution, 2.0)


def test_observed_orders():
    assert observed_orders([0.1, 0.05, 0.025], [1e-2, 2.5e-3, 6.25e-4]) == pytest.approx([2.0, 2.0])
    with pytest.raises(ValueError, match="one error per mesh size"):
        observed_orders([0.1], [1.0, 2.0])


def test_bln_report_constant_has_no_violation(constant_solution):
    report = boundary_bln_report(constant_solution)
    assert report.max_violation == 0.0
