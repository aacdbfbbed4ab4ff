"""
Finite-difference form of the shared radial operator.

In t = arcsin(sqrt(lambda) r)/sqrt(lambda) and chi = sin(sqrt(lambda) t) F the radial equation is
    -chi'' + [J(J+1) lambda cot^2(sqrt(lambda) t) + (eta/lambda) tan^2(sqrt(lambda) t)] chi
        = (epsilon + lambda) chi,
a Schroedinger operator on a uniform grid, so the sixth order stencil gives a symmetric banded
matrix directly. The inner wall is t = 0 with ghost values taken from the parity (-1)^(J+1) of
chi; the outer wall is Dirichlet with odd reflection.
"""
from typing import Optional

import math

import numpy as np
from pydantic import BaseModel
from scipy import sparse
from scipy.linalg import eig_banded

from dkp_spectra.constants import (
    FD6_SECOND_DERIVATIVE,
    GAUSSIAN_TAIL_EXPONENT,
    MAX_EIGENPAIRS,
    MIN_GRID_SIZE,
    ORACLE_INSET_FACTOR,
)
from dkp_spectra.exceptions import GridTooCoarse, InvalidQuantumNumbers
from dkp_spectra.models.params import Params
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

BANDWIDTH = len(FD6_SECOND_DERIVATIVE) - 1


class SymmetrizationRecord(BaseModel):
    variable: str = "t = arcsin(sqrt(lambda) r) / sqrt(lambda)"
    unknown: str = "chi = sin(sqrt(lambda) t) F"
    # matrix eigenvalue minus epsilon
    eigenvalue_shift: float
    inner_parity: int
    outer_wall_r: float
    outer_wall_t: float
    # True when the Gaussian tail, not the domain inset, fixed the outer wall
    tail_cut: bool

    class Config:
        frozen = True


class DiscretizedOperator(BaseModel):
    params: Params
    J: int
    M: int
    h: float
    # interior nodes t_i = i h, i = 1..M-1, and the matching radii
    t: np.ndarray
    r: np.ndarray
    matrix: sparse.csr_matrix
    symmetrization: SymmetrizationRecord

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def band(self) -> np.ndarray:
        return upper_band(self.matrix)


def fd6_operator(
    potential: np.ndarray, h: float, left_parity: int = -1, kinetic: float = 1.0
) -> sparse.csr_matrix:
    """
    -kinetic * d^2/dt^2 + potential on the interior nodes 1..M-1 of a uniform grid with walls at
    nodes 0 and M. Ghost values beyond the left wall are left_parity times their mirror images
    (-1 is a Dirichlet wall); beyond the right wall the reflection is always odd.
    """
    size = len(potential)
    M = size + 1
    rows, cols, values = [], [], []

    def add(i: int, j: int, value: float) -> None:
        rows.append(i - 1)
        cols.append(j - 1)
        values.append(value)

    scale = -kinetic / h**2
    for i in range(1, M):
        add(i, i, scale * FD6_SECOND_DERIVATIVE[0] + potential[i - 1])
        for d, weight in enumerate(FD6_SECOND_DERIVATIVE[1:], start=1):
            for j in (i - d, i + d):
                if 0 < j < M:
                    add(i, j, scale * weight)
                elif j < 0:
                    add(i, -j, scale * weight * left_parity)
                elif j > M:
                    add(i, 2 * M - j, -scale * weight)
    return sparse.csr_matrix((values, (rows, cols)), shape=(size, size))


def upper_band(matrix: sparse.spmatrix, bandwidth: int = BANDWIDTH) -> np.ndarray:
    """Upper banded storage a_band[bandwidth + i - j, j] = a[i, j] for eig_banded."""
    size = matrix.shape[0]
    band = np.zeros((bandwidth + 1, size))
    for offset in range(bandwidth + 1):
        band[bandwidth - offset, offset:] = matrix.diagonal(offset)
    return band


def symmetry_defect(matrix: sparse.spmatrix) -> float:
    """max |A - A^T| / max |A|"""
    difference = abs(matrix - matrix.T).max()
    return float(difference / abs(matrix).max())


def lowest_eigenpairs(matrix: sparse.spmatrix, count: int) -> tuple[np.ndarray, np.ndarray]:
    """The count smallest eigenvalues, ascending, with unit eigenvectors as columns."""
    if not 1 <= count <= MAX_EIGENPAIRS:
        raise InvalidQuantumNumbers(f"eigenpair count {count} must lie in [1, {MAX_EIGENPAIRS}]")
    return eig_banded(upper_band(matrix), lower=False, select="i", select_range=(0, count - 1))


def outer_wall(params: Params, inset: Optional[float] = None) -> tuple[float, bool]:
    """Outer wall in t and whether the Gaussian tail cut it short of the domain inset."""
    params.require_anti_de_sitter("discretize")
    root = math.sqrt(params.lam)
    radius = params.domain_radius
    inset = ORACLE_INSET_FACTOR * radius if inset is None else inset
    t_inset = math.asin(root * (radius - inset)) / root
    t_tail = math.sqrt(2.0 * GAUSSIAN_TAIL_EXPONENT * params.hbar / (params.m * params.omega))
    return min(t_inset, t_tail), t_tail < t_inset


def discretize(params: Params, J: int, M: int, inset: Optional[float] = None) -> DiscretizedOperator:
    if M < MIN_GRID_SIZE:
        raise GridTooCoarse(M, MIN_GRID_SIZE)
    if J < 0:
        raise InvalidQuantumNumbers(f"J={J} must be nonnegative")
    t_wall, tail_cut = outer_wall(params, inset)
    lam = params.lam
    root = math.sqrt(lam)
    h = t_wall / M
    t = h * np.arange(1, M)
    theta = root * t
    potential = J * (J + 1) * lam / np.tan(theta) ** 2 + (params.eta / lam) * np.tan(theta) ** 2
    parity = (-1) ** (J + 1)
    matrix = fd6_operator(potential, h, left_parity=parity)
    logger.debug(f"Discretized J={J} on M={M}, h={h}, outer wall t={t_wall} (tail cut {tail_cut})")
    return DiscretizedOperator(
        params=params,
        J=J,
        M=M,
        h=h,
        t=t,
        r=np.sin(theta) / root,
        matrix=matrix,
        symmetrization=SymmetrizationRecord(
            eigenvalue_shift=lam,
            inner_parity=parity,
            outer_wall_r=math.sin(root * t_wall) / root,
            outer_wall_t=t_wall,
            tail_cut=tail_cut,
        ),
    )
