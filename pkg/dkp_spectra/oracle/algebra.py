"""
One-dimensional realization of the deformed algebra [X, P] = i hbar (1 + lambda X^2):
    X = x / sqrt(1 - lambda x^2),    P = -i hbar sqrt(1 - lambda x^2) d/dx.
"""
from typing import Callable, Optional

import math

import numpy as np
from pydantic import BaseModel

from dkp_spectra.constants import DEFAULT_GRID_SIZE, UNCERTAINTY_SLACK
from dkp_spectra.exceptions import DeSitterUnsupported, DomainError, UnknownTestFunction
from dkp_spectra.models.params import Params
from dkp_spectra.oracle.discretize import fd6_operator, lowest_eigenpairs, outer_wall
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

Function = Callable[[np.ndarray], np.ndarray]
MomentumOperator = Callable[[float, np.ndarray, Function, Function, float], np.ndarray]


class CatalogFunction(BaseModel):
    name: str
    f: Function
    df: Function

    class Config:
        frozen = True
        arbitrary_types_allowed = True


def _gaussian(x: np.ndarray) -> np.ndarray:
    return np.exp(-(x**2))


TEST_FUNCTIONS: dict[str, CatalogFunction] = {
    "gaussian": CatalogFunction(
        name="gaussian",
        f=_gaussian,
        df=lambda x: -2.0 * x * _gaussian(x),
    ),
    "poly_gaussian": CatalogFunction(
        name="poly_gaussian",
        f=lambda x: (1.0 + x + x**2) * _gaussian(x),
        df=lambda x: ((1.0 + 2.0 * x) - 2.0 * x * (1.0 + x + x**2)) * _gaussian(x),
    ),
    "shifted_gaussian": CatalogFunction(
        name="shifted_gaussian",
        f=lambda x: np.exp(-2.0 * (x - 0.3) ** 2),
        df=lambda x: -4.0 * (x - 0.3) * np.exp(-2.0 * (x - 0.3) ** 2),
    ),
    "cubic_gaussian": CatalogFunction(
        name="cubic_gaussian",
        f=lambda x: x**3 * np.exp(-0.5 * x**2),
        df=lambda x: (3.0 * x**2 - x**4) * np.exp(-0.5 * x**2),
    ),
}


def _check_samples(lam: float, x: np.ndarray) -> None:
    if lam > 0:
        edge = 1.0 / math.sqrt(lam)
        if np.any(np.abs(x) >= edge):
            raise DomainError("x", x, -edge, edge)


def position_operator(lam: float, x: np.ndarray, f: Function) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check_samples(lam, x)
    return x / np.sqrt(1.0 - lam * x**2) * f(x)


def momentum_operator(
    lam: float, x: np.ndarray, f: Function, df: Function, hbar: float = 1.0
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check_samples(lam, x)
    return -1j * hbar * np.sqrt(1.0 - lam * x**2) * df(x)


def commutator_residual(
    lam: float,
    test_function_id: str,
    sample_points: np.ndarray,
    hbar: float = 1.0,
    momentum: Optional[MomentumOperator] = None,
) -> float:
    """
    max |(XP - PX) f - i hbar (1 + lambda X^2) f| / max |i hbar (1 + lambda X^2) f|, with the
    exact derivatives of the catalog function.
    """
    if test_function_id not in TEST_FUNCTIONS:
        raise UnknownTestFunction(test_function_id, list(TEST_FUNCTIONS))
    momentum = momentum or momentum_operator
    test = TEST_FUNCTIONS[test_function_id]
    x = np.asarray(sample_points, dtype=float)
    _check_samples(lam, x)
    v = 1.0 - lam * x**2
    X = x / np.sqrt(v)

    def Xf(y: np.ndarray) -> np.ndarray:
        return y / np.sqrt(1.0 - lam * y**2) * test.f(y)

    def dXf(y: np.ndarray) -> np.ndarray:
        w = 1.0 - lam * y**2
        return w**-1.5 * test.f(y) + y / np.sqrt(w) * test.df(y)

    XP = X * momentum(lam, x, test.f, test.df, hbar)
    PX = momentum(lam, x, Xf, dXf, hbar)
    expected = 1j * hbar * (1.0 + lam * X**2) * test.f(x)
    scale = float(np.max(np.abs(expected)))
    return float(np.max(np.abs(XP - PX - expected))) / scale


def momentum_uncertainty_bound(dx: float, lam: float, hbar: float = 1.0) -> float:
    """
    Smallest Delta P allowed at a given Delta X, (hbar/2)(1/Delta X + lambda Delta X).

    >>> momentum_uncertainty_bound(2.0, 0.0)
    0.25
    """
    return 0.5 * hbar * (1.0 / dx + lam * dx)


def minimal_momentum_uncertainty(lam: float, hbar: float = 1.0) -> float:
    """hbar sqrt(lambda), reached at Delta X = 1/sqrt(lambda); zero in flat space."""
    if lam < 0:
        raise DeSitterUnsupported("minimal_momentum_uncertainty")
    return hbar * math.sqrt(lam)


class UncertaintyProduct(BaseModel):
    dx: float
    dp: float
    product: float
    # (hbar/2)(1 + lambda <X^2>)
    bound: float
    grid_size: int

    class Config:
        frozen = True

    @property
    def slack(self) -> float:
        return self.product - self.bound

    @property
    def satisfied(self) -> bool:
        return self.slack >= -UNCERTAINTY_SLACK


def uncertainty_product(params: Params, M: int = DEFAULT_GRID_SIZE) -> UncertaintyProduct:
    """
    Delta X Delta P of the ground state of P^2/2m + m omega^2 X^2 / 2 in the realization above.

    With x = sin(sqrt(lambda) t)/sqrt(lambda) the momentum is -i hbar d/dt and
    X = tan(sqrt(lambda) t)/sqrt(lambda), so the Hamiltonian is a symmetric well on |t| < t_wall
    with potential (m omega^2 / 2 lambda) tan^2(sqrt(lambda) t).
    """
    t_wall, _ = outer_wall(params)
    root = math.sqrt(params.lam)
    h = 2.0 * t_wall / M
    t = -t_wall + h * np.arange(1, M)
    X = np.tan(root * t) / root
    potential = 0.5 * params.m * params.omega**2 * X**2
    kinetic = params.hbar**2 / (2.0 * params.m)
    hamiltonian = fd6_operator(potential, h, left_parity=-1, kinetic=kinetic)
    _, vectors = lowest_eigenpairs(hamiltonian, 1)
    psi = vectors[:, 0] / np.linalg.norm(vectors[:, 0])
    mean_x = float(np.dot(psi**2, X))
    dx = math.sqrt(max(float(np.dot(psi**2, X**2)) - mean_x**2, 0.0))
    # <P^2> from the same stencil: hbar^2 psi^T (-d^2/dt^2) psi
    laplacian = fd6_operator(np.zeros_like(t), h, left_parity=-1, kinetic=1.0)
    dp = params.hbar * math.sqrt(float(psi @ (laplacian @ psi)))
    bound = 0.5 * params.hbar * (1.0 + params.lam * (dx**2 + mean_x**2))
    logger.debug(f"Uncertainty product dx={dx}, dp={dp}, product={dx * dp}, bound={bound}")
    return UncertaintyProduct(dx=dx, dp=dp, product=dx * dp, bound=bound, grid_size=M)
