import numpy as np
from numpy.polynomial.legendre import leggauss


def gauss_legendre(n: int):
    """Gauss-Legendre points and weights mapped to [0, 1]."""
    if n < 1:
        raise ValueError(f"quadrature needs at least one point, got {n}")
    x, w = leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def tensor_gauss_legendre(n: int):
    """Tensor rule on [0, 1]^2; point k = (a, b) is stored at index a * n + b."""
    x, w = gauss_legendre(n)
    tt, xx = np.meshgrid(x, x, indexing="ij")
    points = np.column_stack([tt.ravel(), xx.ravel()])
    weights = np.outer(w, w).ravel()
    return points, weights
