import numpy as np
import pytest

from app.law.ConservationLaw import advection, buckley_leverett, burgers
from app.solver.NumericalFlux import (
    FluxFamily,
    ct_coefficient,
    face_flux_terms,
    flux_family,
    numerical_flux,
    signed_variation,
)
from app.solver.Stabilization import StabilizationConfig

EO = StabilizationConfig()
LF = StabilizationConfig(flux_family="lax_friedrichs")


def test_flux_family_by_name():
    assert flux_family("lax_friedrichs") is FluxFamily.LAX_FRIEDRICHS
    with pytest.raises(ValueError, match="unknown flux family"):
        flux_family("roe")


def test_signed_variation_burgers_across_sonic_point():
    # int_{-1}^{1} |u| du = 1
    assert float(signed_variation(burgers(), 1.0, -1.0)) == pytest.approx(1.0)
    assert float(signed_variation(burgers(), -1.0, 1.0)) == pytest.approx(-1.0)


@pytest.mark.parametrize("normal", [(1.0, 0.0), (-1.0, 0.0)])
def test_ct_coefficient_time_faces_is_half(normal):
    assert ct_coefficient(EO, burgers(), 3.0, -2.0, normal, False) == 0.5


def test_numerical_flux_time_faces_are_upwind():
    law = burgers()
    assert numerical_flux(EO, law, 0.8, 0.1, (1.0, 0.0), False) == pytest.approx(0.8)
    assert numerical_flux(EO, law, 0.8, 0.1, (-1.0, 0.0), False) == pytest.approx(-0.1)


def test_engquist_osher_interior_burgers_right_moving_is_upwind():
    law = burgers()
    assert ct_coefficient(EO, law, 1.0, 0.0, (0.0, 1.0), False) == pytest.approx(0.25)
    assert numerical_flux(EO, law, 1.0, 0.0, (0.0, 1.0), False) == pytest.approx(0.5)


def test_engquist_osher_boundary_uses_full_coefficient():
    law = burgers()
    assert ct_coefficient(EO, law, 1.0, 0.0, (0.0, 1.0), True) == pytest.approx(0.5)


def test_lax_friedrichs_interior_burgers():
    law = burgers()
    assert ct_coefficient(LF, law, 1.0, 0.0, (0.0, 1.0), False) == pytest.approx(0.5)
    assert numerical_flux(LF, law, 1.0, 0.0, (0.0, 1.0), False) == pytest.approx(0.75)


def test_numerical_flux_consistent_for_equal_states():
    law = burgers()
    for cfg in (EO, LF):
        assert numerical_flux(cfg, law, 0.6, 0.6, (0.0, -1.0), False) == pytest.approx(-0.18)


def test_advection_engquist_osher_coefficient_is_half_speed():
    assert ct_coefficient(EO, advection(2.0), 0.3, 0.9, (0.0, 1.0), False) == pytest.approx(1.0)


@pytest.mark.parametrize("normal", [(0.6, 0.8), (1.0, 1.0), (0.0, 0.0), (0.0, 1.0, 0.0)])
def test_numerical_flux_invalid_normal_rejected(normal):
    with pytest.raises(ValueError, match="face normal"):
        numerical_flux(EO, burgers(), 1.0, 0.0, normal, False)


@pytest.mark.parametrize("cfg", [EO, LF], ids=["eo", "lf"])
@pytest.mark.parametrize("boundary", [False, True])
def test_face_flux_terms_derivatives_match_finite_differences(cfg, boundary):
    law, eps = burgers(), 1e-6
    own, other = np.array([0.7, -0.4]), np.array([0.2, -0.9])
    terms = face_flux_terms(cfg, law, own, other, 1.0, boundary)
    up = face_flux_terms(cfg, law, own + eps, other, 1.0, boundary).value
    down = face_flux_terms(cfg, law, own - eps, other, 1.0, boundary).value
    np.testing.assert_allclose((up - down) / (2 * eps), terms.d_own, rtol=1e-6, atol=1e-8)
    up = face_flux_terms(cfg, law, own, other + eps, 1.0, boundary).value
    down = face_flux_terms(cfg, law, own, other - eps, 1.0, boundary).value
    np.testing.assert_allclose((up - down) / (2 * eps), terms.d_other, rtol=1e-6, atol=1e-8)


def test_face_flux_terms_zero_for_matching_traces():
    terms = face_flux_terms(EO, burgers(), np.array([0.4]), np.array([0.4]), -1.0, False)
    assert terms.value[0] == pytest.approx(0.0)


def test_face_flux_terms_cap_warns_and_limits(caplog):
    capped = StabilizationConfig(C0_interior=0.1)
    terms = face_flux_terms(capped, burgers(), np.array([1.0]), np.array([0.0]), 1.0, False)
    assert terms.C[0] == pytest.approx(0.1)
    assert "capped" in caplog.text


def test_lax_friedrichs_boundary_coefficient_is_full_speed_supremum():
    # g_D = 0 outside, trace 2 inside: sup |z| on [0, 2]
    assert ct_coefficient(LF, burgers(), 2.0, 0.0, (0.0, 1.0), True) == pytest.approx(2.0)


def test_lax_friedrichs_advection_interior_is_upwind():
    law = advection(1.0)
    assert ct_coefficient(LF, law, 1.0, 3.0, (0.0, 1.0), False) == pytest.approx(0.5)
    assert numerical_flux(LF, law, 1.0, 3.0, (0.0, 1.0), False) == pytest.approx(1.0)


def test_lax_friedrichs_coefficient_sees_interior_speed_peak():
    law = buckley_leverett()
    # |f'| vanishes at both traces but not between them
    C = ct_coefficient(LF, law, 1.0, 0.0, (0.0, 1.0), True)
    assert C == pytest.approx(np.abs(law.speed(np.linspace(0.0, 1.0, 100001))).max(), rel=1e-8)
    assert C > 1.0


@pytest.mark.parametrize("cfg", [EO, LF], ids=["eo", "lf"])
@pytest.mark.parametrize(
    "law,states",
    [(burgers(), np.linspace(-1.0, 1.0, 81)), (buckley_leverett(), np.linspace(0.0, 1.0, 81))],
    ids=["burgers", "buckley_leverett"],
)
@pytest.mark.parametrize("boundary", [False, True])
@pytest.mark.parametrize("nx", [1.0, -1.0])
def test_numerical_flux_monotone_over_state_grid(cfg, law, states, boundary, nx):
    own, other = (grid.ravel() for grid in np.meshgrid(states, states))
    terms = face_flux_terms(cfg, law, own, other, nx, boundary)
    # F^ = g + f(own) nx: nondecreasing in the own trace, nonincreasing in the other
    d_flux_own = terms.d_own + law.speed(own) * nx
    assert d_flux_own.min() >= -1e-12
    assert terms.d_other.max() <= 1e-12


def test_numerical_flux_monotone_by_differences():
    law, states = buckley_leverett(), np.linspace(0.0, 1.0, 81)
    own, other = (grid.ravel() for grid in np.meshgrid(states, states))
    step = 1e-6
    for cfg in (EO, LF):
        base = face_flux_terms(cfg, law, own, other, 1.0, False).value + law.flux(own)
        raised = face_flux_terms(cfg, law, own + step, other, 1.0, False).value + law.flux(own + step)
        assert ((raised - base) / step).min() >= -1e-6
        raised = face_flux_terms(cfg, law, own, other + step, 1.0, False).value + law.flux(own)
        assert ((raised - base) / step).max() <= 1e-6
