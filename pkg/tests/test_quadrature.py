from __future__ import annotations

import math

import numpy as np
import pytest

from weyl1d import errors
from weyl1d.quadrature import fixed_gauss, gauss_legendre, integrate_intervals


@pytest.mark.parametrize("order", [2, 5, 10])
def test_gauss_legendre_exact_for_polynomials(order):
    s, w = gauss_legendre(order)
    for p in range(2 * order):
        assert float(w @ s ** p) == pytest.approx(1.0 / (p + 1), rel=1e-13)


def test_fixed_gauss_many_intervals():
    a = np.array([0.0, 1.0, 2.0])
    np.testing.assert_allclose(fixed_gauss(np.exp, a, a + 1), np.exp(a + 1) - np.exp(a), rtol=1e-14)


@pytest.mark.parametrize("func, a, b, exact", [
    (np.sin, 0.0, math.pi, 2.0),
    (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.045 + 0.245),
    (lambda x: x ** -0.5, 1e-12, 1.0, 2.0 - 2e-6),
])
def test_adaptive_integrals(func, a, b, exact):
    assert float(integrate_intervals(func, a, b, rtol=1e-12)) == pytest.approx(exact, rel=1e-10)


def test_scalar_in_scalar_out():
    out = integrate_intervals(np.cos, 0.0, 1.0)
    assert np.ndim(out) == 0


def test_broadcast_shape_kept():
    a = np.zeros((2, 3))
    out = integrate_intervals(lambda x: 2 * x, a, a + np.arange(1, 4))
    np.testing.assert_allclose(out, np.broadcast_to([1.0, 4.0, 9.0], (2, 3)), rtol=1e-14)


def test_nonfinite_integrand_raises():
    with pytest.raises(errors.QuadratureNonConvergence):
        integrate_intervals(lambda x: np.where(x > 0.5, np.nan, x), 0.0, 1.0)
