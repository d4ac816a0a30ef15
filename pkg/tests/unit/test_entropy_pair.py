import numpy as np
import pytest

from app.law.ConservationLaw import advection, burgers
from app.law.EntropyPair import EntropyFunction, entropy_flux_build, power_entropy


def test_power_entropy_quadratic_values():
    entropy = power_entropy(2)
    assert float(entropy.eta(3.0)) == pytest.approx(4.5)
    assert float(entropy.eta_prime(3.0)) == pytest.approx(3.0)
    assert float(entropy.eta_second(3.0)) == pytest.approx(1.0)


@pytest.mark.parametrize("q", [1, 3, 0])
def test_power_entropy_odd_or_small_exponent_rejected(q):
    with pytest.raises(ValueError, match="even exponent"):
        power_entropy(q)


def test_q_flux_burgers_quadratic_entropy_is_cubic():
    pair = entropy_flux_build(burgers(), power_entropy(2), 0.0)
    # q(u) = int_0^u r * r dr = u^3 / 3
    assert pair.q_flux(1.5) == pytest.approx(1.5**3 / 3.0, abs=1e-12)


def test_q_difference_independent_of_reference_state():
    a = entropy_flux_build(burgers(), power_entropy(4), 0.0)
    b = entropy_flux_build(burgers(), power_entropy(4), 0.7)
    upper, lower = np.array([1.0, -0.5]), np.array([0.2, 0.3])
    np.testing.assert_allclose(a.q_difference(upper, lower), b.q_difference(upper, lower), atol=1e-12)


def test_compatibility_defect_small_for_catalog_pairs():
    for law in (burgers(), advection(2.0)):
        pair = entropy_flux_build(law, power_entropy(2), 0.0)
        assert pair.compatibility_defect(np.linspace(-1.0, 1.0, 11)) < 1e-6


def test_entropy_flux_build_non_convex_entropy_rejected():
    concave = EntropyFunction(
        name="-u^2/2",
        eta=lambda u: -0.5 * np.asarray(u) ** 2,
        eta_prime=lambda u: -np.asarray(u, dtype=float),
        eta_second=lambda u: -np.ones_like(np.asarray(u, dtype=float)),
    )
    with pytest.raises(ValueError, match="not convex"):
        entropy_flux_build(burgers(), concave, 0.0)
