import numpy as np
import pytest

from app.element.AffineMap import AffineMap


def test_diagonal_map_physical_points_and_determinant():
    amap = AffineMap.diagonal([0.1, 0.05], [1.0, 2.0])
    assert amap.dim == 2
    assert amap.det_J == pytest.approx(0.005)
    np.testing.assert_allclose(amap.to_physical([[1.0, 1.0]]), [[1.1, 2.05]])


def test_shape_constant_anisotropic_diagonal():
    assert AffineMap.diagonal([0.1, 0.05]).shape_constant == pytest.approx(2.0)


def test_transfer_gradient_scales_by_inverse_jacobian():
    amap = AffineMap.diagonal([0.5, 0.25])
    np.testing.assert_allclose(amap.transfer_gradient([[1.0, 1.0]]), [[2.0, 4.0]])


def test_metric_decomposition_eigenvalues_ascending():
    mu, psi = AffineMap.diagonal([0.5, 0.25]).metric_decomposition()
    np.testing.assert_allclose(mu, [4.0, 16.0])
    np.testing.assert_allclose(np.abs(psi), np.eye(2), atol=1e-14)


def test_singular_map_rejected():
    with pytest.raises(ValueError, match="singular"):
        AffineMap(J=np.array([[1.0, 2.0], [2.0, 4.0]]), b=np.zeros(2))


def test_inconsistent_shapes_rejected():
    with pytest.raises(ValueError, match="inconsistent"):
        AffineMap(J=np.eye(2), b=np.zeros(3))
