import pytest

from app.workflow.RunConfig import parse_config
from app.workflow.RunWorkflow import sweep
from tests.support import config_text


@pytest.mark.slow
def test_burgers_shock_position_and_l1_convergence(tmp_path):
    config = parse_config(config_text("burgers", "riemann", 8, 1, t_final=0.5))
    result = sweep(config, refine=3, output_dir=str(tmp_path))
    assert result.errors == []
    for row in result.rows:
        # front x0 + T / 2
        assert row["shock_position"] == pytest.approx(0.5, abs=2.0 * row["h"])
    l1 = [row["l1_error"] for row in result.rows]
    assert l1[0] > l1[1] > l1[2]


@pytest.mark.slow
@pytest.mark.parametrize("p", [1, 2])
def test_transport_convergence_order(tmp_path, p):
    config = parse_config(config_text("advection", "sine", 4, p, t_final=0.25))
    result = sweep(config, refine=3, output_dir=str(tmp_path))
    assert result.errors == []
    errors = [row["l2_error"] for row in result.rows]
    assert errors[0] > errors[1] > errors[2]
    assert min(result.orders["l2_error"]) >= p + 0.5


@pytest.mark.slow
def test_sweep_csv_bitwise_reproducible(tmp_path):
    config = parse_config(config_text("burgers", "riemann", 8, 1, t_final=0.25))
    sweep(config, refine=2, output_dir=str(tmp_path / "a"))
    sweep(config, refine=2, jobs=2, output_dir=str(tmp_path / "b"))
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()
