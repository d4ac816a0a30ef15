import numpy as np
import pytest

from app.element.ReferenceElement import build_reference
from app.spectral.CoercivityLemma import verify_lemma
from app.spectral.NumericalRange import verify_range_inclusion

Q_LIST = (2, 4, 6, 8)


@pytest.mark.parametrize("p,dim", [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2)])
def test_coercivity_bound_over_q_list(p, dim):
    report = verify_lemma(build_reference(p, dim=dim), trials=1000, q_list=Q_LIST, seed=0)
    assert all(case.holds_q for case in report.cases.values())
    assert report.cases[2].min_ratio == pytest.approx(1.0)


@pytest.mark.parametrize("p,dim", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_q_independent_constant_low_degree(p, dim):
    report = verify_lemma(build_reference(p, dim=dim), trials=1000, q_list=Q_LIST, seed=0)
    assert all(case.holds for case in report.cases.values())


def test_quadratic_range_inclusion_random_psd():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(1, 11))
        B = rng.standard_normal((n, n))
        report = verify_range_inclusion(B @ B.T, 2, trials=1000, seed=int(rng.integers(1 << 31)))
        assert report.violations == 0


@pytest.mark.parametrize("q", [2, 4, 8])
def test_range_inclusion_random_diagonal_psd(q):
    rng = np.random.default_rng(q)
    for _ in range(100):
        n = int(rng.integers(1, 11))
        report = verify_range_inclusion(np.diag(rng.uniform(0.0, 3.0, n)), q, trials=1000, seed=int(rng.integers(1 << 31)))
        assert report.violations == 0
        assert report.max_value <= report.lambda_max + 1e-10
