from typing import Optional

import math
from functools import lru_cache

import numpy as np
from pydantic import BaseModel
from scipy.optimize import brentq

from dkp_spectra.constants import (
    DEFAULT_GRID_SIZE,
    EIGENSOLVER_NOISE_FLOOR,
    MAX_EIGENPAIRS,
    RICHARDSON_ORDER,
    ROOT_RESIDUAL_TOLERANCE,
    Branch,
    Sector,
)
from dkp_spectra.exceptions import InversionNegative, NoRootInBracket
from dkp_spectra.models.params import Params, QuantumState
from dkp_spectra.oracle.discretize import DiscretizedOperator, discretize, lowest_eigenpairs
from dkp_spectra.spectra.energies import e_squared_from_epsilon, epsilon_from_energy
from dkp_spectra.utils.telemetry import setup_logger
from dkp_spectra.wavefunctions.radial import radial_F

logger = setup_logger(__name__)


class OracleSpectrum(BaseModel):
    J: int
    grid_sizes: tuple[int, ...]
    # eigenvalues epsilon per grid size, ascending
    levels: tuple[tuple[float, ...], ...]
    # Richardson estimate from the two finest grids
    extrapolated: tuple[float, ...]
    # |eps(M) - eps(2M)| / |eps(2M) - eps(4M)|, None when below the eigensolver noise floor
    shrink: tuple[Optional[float], ...]
    # finest operator and its eigenvectors (columns)
    operator: DiscretizedOperator
    vectors: np.ndarray

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def epsilon(self, n: int) -> float:
        return self.extrapolated[n]

    @property
    def extrapolation_estimate(self) -> tuple[float, ...]:
        """Difference between the extrapolated and finest-grid eigenvalues."""
        return tuple(abs(e - f) for e, f in zip(self.extrapolated, self.levels[-1]))


def richardson(coarse: float, fine: float, order: int = RICHARDSON_ORDER) -> float:
    """
    >>> round(richardson(1.0 + 64e-6, 1.0 + 1e-6), 12)
    1.0
    """
    return fine + (fine - coarse) / (2**order - 1)


def _shrink(values: list[float]) -> Optional[float]:
    first, second = abs(values[0] - values[1]), abs(values[1] - values[2])
    if first <= EIGENSOLVER_NOISE_FLOOR * abs(values[1]) or second == 0.0:
        return None
    return first / second


def eigenpair_count(n: int) -> int:
    # one shared request size keeps the cache hot across n
    return max(n + 1, MAX_EIGENPAIRS)


@lru_cache(maxsize=64)
def oracle_spectrum(
    params: Params, J: int, count: int, M: int = DEFAULT_GRID_SIZE, refinements: int = 2
) -> OracleSpectrum:
    """
    Lowest count eigenvalues of the radial operator on grids M, 2M (and 4M for three
    refinements), extrapolated in h^6.
    """
    grid_sizes = tuple(M * 2**level for level in range(refinements))
    levels = []
    operator, vectors = None, None
    for size in grid_sizes:
        operator = discretize(params, J, size)
        values, vectors = lowest_eigenpairs(operator.matrix, count)
        levels.append(tuple(float(v) - operator.symmetrization.eigenvalue_shift for v in values))
    extrapolated = tuple(richardson(c, f) for c, f in zip(levels[-2], levels[-1]))
    if refinements >= 3:
        shrink = tuple(_shrink([level[n] for level in levels[-3:]]) for n in range(count))
    else:
        shrink = tuple(None for _ in range(count))
    return OracleSpectrum(
        J=J,
        grid_sizes=grid_sizes,
        levels=tuple(levels),
        extrapolated=extrapolated,
        shrink=shrink,
        operator=operator,
        vectors=vectors,
    )


def oracle_energy(
    params: Params, n: int, J: int, sector: Sector, M: int = DEFAULT_GRID_SIZE
) -> float:
    """
    Energy from the numeric eigenvalue of the spin-0 or natural parity sector. Both sectors
    share one operator, only the inversion to E differs.
    """
    state = QuantumState(n=n, J=J, sector=sector)
    epsilon = oracle_spectrum(params, J, eigenpair_count(n), M).epsilon(n)
    e_squared = e_squared_from_epsilon(params, epsilon, sector)
    if e_squared <= 0:
        raise InversionNegative(epsilon, e_squared)
    logger.debug(f"Oracle {state.label}: epsilon={epsilon}, E^2={e_squared}")
    return math.sqrt(e_squared)


def oracle_energy_unnatural(
    params: Params, n: int, J: int, branch: Branch, M: int = DEFAULT_GRID_SIZE
) -> float:
    """
    Self-consistent unnatural energy: the operator does not depend on E, so its eigenvalue is
    computed once and E is the root of epsilon_branch(E) = epsilon_n.
    """
    sector = Sector.unnatural(branch)
    state = QuantumState(n=n, J=J, sector=sector)
    target = oracle_spectrum(params, J, eigenpair_count(n), M).epsilon(n)

    def residual(E: float) -> float:
        return epsilon_from_energy(params, E, J, sector) - target

    lower, upper = 0.0, params.rest_energy
    for _ in range(200):
        if residual(upper) > 0:
            break
        upper *= 2.0
    f_lower, f_upper = residual(lower), residual(upper)
    if f_lower * f_upper > 0:
        raise NoRootInBracket(lower, upper, f_lower, f_upper)
    root = brentq(residual, lower, upper, xtol=1e-300, rtol=4.0 * 2.0**-52, maxiter=500)
    scale = max(abs(target), root**2 / (params.hbar * params.c) ** 2)
    if abs(residual(root)) > ROOT_RESIDUAL_TOLERANCE * scale:
        logger.warning(f"Oracle root residual {residual(root)} for {state.label} exceeds tolerance")
    return root


def eigenfunction_overlap(params: Params, state: QuantumState, M: int = DEFAULT_GRID_SIZE) -> float:
    """
    |<numeric, closed form>| with both normalized in r^2 dr / sqrt(1 - lambda r^2), which is dt
    for chi = sqrt(lambda) r F on the oracle grid.
    """
    spectrum = oracle_spectrum(params, state.J, eigenpair_count(state.n), M)
    operator = spectrum.operator
    numeric = spectrum.vectors[:, state.n]
    closed = math.sqrt(params.lam) * operator.r * radial_F(params, state.n, state.J, operator.r)
    overlap = abs(float(np.dot(numeric, closed)))
    return overlap / float(np.linalg.norm(numeric) * np.linalg.norm(closed))
