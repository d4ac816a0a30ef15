import numpy as np
import pytest

from app.diagnostics.Oracles import burgers_riemann, shock_speed, transport
from app.law.ConservationLaw import advection, burgers


def test_shock_speed_burgers():
    assert shock_speed(burgers(), 1.0, 0.0) == pytest.approx(0.5)
    assert shock_speed(burgers(), 2.0, -1.0) == pytest.approx(0.5)


def test_shock_speed_equal_states_is_characteristic_speed():
    assert shock_speed(burgers(), 0.7, 0.7) == pytest.approx(0.7)
    assert shock_speed(advection(2.0), 0.3, 0.3) == pytest.approx(2.0)


def test_transport_shifts_profile():
    exact = transport(lambda x: x**2, 0.5)
    np.testing.assert_allclose(exact(2.0, np.array([1.0, 3.0])), [0.0, 4.0])


def test_burgers_riemann_shock():
    exact = burgers_riemann(1.0, 0.0, 0.25)
    np.testing.assert_allclose(exact(0.5, np.array([0.49, 0.51])), [1.0, 0.0])
    np.testing.assert_allclose(exact(0.0, np.array([0.2, 0.3])), [1.0, 0.0])


def test_burgers_riemann_rarefaction_fan():
    exact = burgers_riemann(-1.0, 1.0, 0.0)
    np.testing.assert_allclose(exact(0.5, np.array([-1.0, -0.25, 0.0, 0.25, 1.0])), [-1.0, -0.5, 0.0, 0.5, 1.0])


def test_burgers_riemann_fan_at_initial_time_is_step():
    exact = burgers_riemann(0.0, 1.0, 0.5)
    np.testing.assert_allclose(exact(0.0, np.array([0.25, 0.75])), [0.0, 1.0])
