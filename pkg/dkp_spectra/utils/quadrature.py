from typing import Callable

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel

from dkp_spectra.constants import DEFAULT_QUADRATURE_ORDER, MAX_QUADRATURE_ORDER, QUADRATURE_RTOL
from dkp_spectra.utils.telemetry import publish_metric_data, setup_logger

logger = setup_logger(__name__)


class QuadratureResult(BaseModel):
    value: float
    order: int
    converged: bool
    # (order, value) for every order evaluated
    history: list[tuple[int, float]]


@lru_cache(maxsize=32)
def _legendre_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(
    integrand: Callable[[np.ndarray], np.ndarray], lower: float, upper: float, order: int
) -> float:
    nodes, weights = _legendre_nodes(order)
    half = 0.5 * (upper - lower)
    x = half * nodes + 0.5 * (upper + lower)
    return float(half * np.dot(weights, integrand(x)))


def adaptive_gauss_legendre(
    integrand: Callable[[np.ndarray], np.ndarray],
    lower: float,
    upper: float,
    order: int = DEFAULT_QUADRATURE_ORDER,
    rtol: float = QUADRATURE_RTOL,
    max_order: int = MAX_QUADRATURE_ORDER,
    label: str = "integral",
) -> QuadratureResult:
    """Doubles the Gauss-Legendre order until two successive values agree to rtol."""
    history = [(order, gauss_legendre(integrand, lower, upper, order))]
    while order < max_order:
        order *= 2
        history.append((order, gauss_legendre(integrand, lower, upper, order)))
        previous, latest = history[-2][1], history[-1][1]
        scale = max(abs(previous), abs(latest))
        if scale == 0.0 or abs(latest - previous) <= rtol * scale:
            return QuadratureResult(value=latest, order=order, converged=True, history=history)
    logger.warning(f"{label} did not reach rtol={rtol} by order {order}: {history[-2:]}")
    publish_metric_data("QuadratureNotConverged", 1, {"integral": label})
    return QuadratureResult(value=history[-1][1], order=order, converged=False, history=history)


def jacobi_weighted_integral(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> float:
    """
    Integral of f(s) (1-s)^a (1+s)^b over (-1, 1).

    With s = cos(theta) the weight becomes 2^(a+b+1) sin^(2a+1)(theta/2) cos^(2b+1)(theta/2),
    which is smooth at both ends for half-integer a and b.

    >>> round(jacobi_weighted_integral(lambda s: np.ones_like(s), 0.0, 0.0), 12)
    2.0
    """

    def integrand(theta: np.ndarray) -> np.ndarray:
        half = 0.5 * theta
        return (
            f(np.cos(theta))
            * 2.0 ** (a + b + 1.0)
            * np.sin(half) ** (2.0 * a + 1.0)
            * np.cos(half) ** (2.0 * b + 1.0)
        )

    return gauss_legendre(integrand, 0.0, np.pi, order)


def radial_integral(
    g: Callable[[np.ndarray], np.ndarray],
    radius: float,
    order: int = DEFAULT_QUADRATURE_ORDER,
    rtol: float = QUADRATURE_RTOL,
    label: str = "radial integral",
) -> QuadratureResult:
    """Integral of g(r) over (0, radius) through r = radius * sin(phi)."""

    def integrand(phi: np.ndarray) -> np.ndarray:
        return g(radius * np.sin(phi)) * radius * np.cos(phi)

    return adaptive_gauss_legendre(integrand, 0.0, 0.5 * np.pi, order=order, rtol=rtol, label=label)
