import math

import numpy as np
import pytest
from scipy.special import beta

from dkp_spectra.utils.quadrature import (
    adaptive_gauss_legendre,
    gauss_legendre,
    jacobi_weighted_integral,
    radial_integral,
)


def test_gauss_legendre_polynomial_is_exact():
    # order 4 integrates degree 7 exactly
    value = gauss_legendre(lambda x: x**7 - 2 * x**2, 0.0, 2.0, 4)
    assert value == pytest.approx(2.0**8 / 8 - 2 * 2.0**3 / 3, rel=1e-13)


def test_adaptive_gauss_legendre_converges():
    result = adaptive_gauss_legendre(np.exp, 0.0, 1.0, order=8)
    assert result.converged
    assert result.value == pytest.approx(math.e - 1.0, rel=1e-13)
    assert result.history[0][0] == 8
    assert result.order == result.history[-1][0]


def test_adaptive_gauss_legendre_reports_failure():
    # |x|^0.5 has a kink at 0; a tiny order cap cannot reach 1e-15
    result = adaptive_gauss_legendre(
        lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, order=2, rtol=1e-15, max_order=8, label="kink"
    )
    assert not result.converged
    assert result.order == 8
    assert len(result.history) == 3


@pytest.mark.parametrize("a, b", [(0.5, 9.5), (1.5, 0.5), (2.5, 29.5)])
def test_jacobi_weighted_integral_beta(a, b):
    # integral of (1-s)^a (1+s)^b is 2^(a+b+1) B(a+1, b+1)
    expected = 2.0 ** (a + b + 1.0) * beta(a + 1.0, b + 1.0)
    value = jacobi_weighted_integral(lambda s: np.ones_like(s), a, b)
    assert value == pytest.approx(expected, rel=1e-12)


def test_radial_integral_ball_volume():
    result = radial_integral(lambda r: 4.0 * np.pi * r**2, 2.0)
    assert result.converged
    assert result.value == pytest.approx(4.0 * np.pi * 8.0 / 3.0, rel=1e-12)
