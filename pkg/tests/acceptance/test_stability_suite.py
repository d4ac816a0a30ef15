import numpy as np
import pytest

from tests.support import config_text

CATALOG_RUNS = [
    (law, scenario, p)
    for law in ("burgers", "advection")
    for scenario in ("riemann", "sine", "constant")
    for p in (0, 1)
]


@pytest.mark.slow
@pytest.mark.parametrize("law,scenario,p", CATALOG_RUNS)
def test_catalog_run_signs_identity_and_conservation(run_config, law, scenario, p):
    state = run_config(config_text(law, scenario, 32, p))
    diagnostics = state["diagnostics"]
    for report in (diagnostics.energy, diagnostics.energy_q[4]):
        assert all(report.sign_checks().values()), report.sign_checks()
    energy = diagnostics.energy
    assert abs(energy.identity_residual) <= 1e-8 * energy.scale
    # the balance sums the slab residual over every test function
    assert max(abs(c) for c in diagnostics.conservation) <= 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("p", [0, 1, 2])
def test_l2_bound_ratio_independent_of_h(run_config, p):
    ratios = [
        run_config(config_text("burgers", "sine", cells, p, t_final=0.25))["diagnostics"].ratio_thm41
        for cells in (16, 32, 64)
    ]
    assert all(np.isfinite(ratios))
    assert (max(ratios) - min(ratios)) / max(ratios) < 0.05


@pytest.mark.slow
@pytest.mark.parametrize("p", [0, 1, 2])
def test_linf_bound_riemann(run_config, p):
    for cells in (16, 32, 64):
        state = run_config(config_text("burgers", "riemann", cells, p, t_final=0.5))
        diagnostics = state["diagnostics"]
        assert diagnostics.ratio_thm51 <= 1.0
        if p == 0:
            assert diagnostics.boundedness.within_data_bound
