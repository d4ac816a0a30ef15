import numpy as np
import pytest

from app.diagnostics.EnergyDiagnostics import TERMS, boundary_data_constant, energy_terms
from app.law.EntropyPair import entropy_flux_build, power_entropy


def quadratic(law):
    return entropy_flux_build(law, power_entropy(2), 0.0)


def test_boundary_data_constant_quadratic():
    # 1/2 * 1/4 * 9 * 1
    assert boundary_data_constant(2) == pytest.approx(9.0 / 8.0)


@pytest.mark.parametrize(
    "fixture,law_fixture",
    [
        ("burgers_riemann_solution", "burgers_law"),
        ("burgers_sine_solution", "burgers_law"),
        ("advection_sine_solution", "advection_law"),
    ],
)
def test_quadratic_energy_identity_closes(request, fixture, law_fixture):
    solution = request.getfixturevalue(fixture)
    report = energy_terms(solution, quadratic(request.getfixturevalue(law_fixture)))
    assert abs(report.identity_residual) <= 1e-8 * report.scale


def test_terms_have_one_entry_per_slab(burgers_riemann_solution, burgers_law):
    report = energy_terms(burgers_riemann_solution, quadratic(burgers_law))
    assert set(report.terms) == set(TERMS)
    assert all(values.shape == (8,) for values in report.terms.values())


def test_time_jump_and_interior_terms_non_negative(burgers_riemann_solution, burgers_law):
    checks = energy_terms(burgers_riemann_solution, quadratic(burgers_law)).sign_checks()
    assert checks["E1"]
    assert checks["E2+E3"]


def test_streamline_and_shock_capturing_terms_dissipate(burgers_riemann_solution, burgers_law):
    report = energy_terms(burgers_riemann_solution, quadratic(burgers_law))
    assert np.all(report.terms["E0"] >= 0.0)
    assert np.all(report.dissipation >= -1e-14)


def test_higher_entropy_has_no_closed_identity(burgers_riemann_solution, burgers_law):
    pair = entropy_flux_build(burgers_law, power_entropy(4), 0.0)
    report = energy_terms(burgers_riemann_solution, pair, q_power=4)
    assert report.identity_residual is None
    assert report.sign_checks()["E1"]


def test_constant_solution_terms_vanish(constant_solution, burgers_law):
    report = energy_terms(constant_solution, quadratic(burgers_law))
    for name in ("E0", "E1", "E2", "E3", "E4", "E5", "F1"):
        np.testing.assert_allclose(report.terms[name], 0.0, atol=1e-12)
    assert report.initial_energy == pytest.approx(0.125)
    assert report.final_energy == pytest.approx(0.125)
    assert all(report.sign_checks().values())
