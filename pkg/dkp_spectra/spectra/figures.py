"""
Data series behind the figures, in natural units hbar = c = m = 1. Each builder returns the
column names and the rows; rendering is left to the caller.
"""
from typing import Any, Callable, Optional

import math

import numpy as np
from pydantic import BaseModel, validator

from dkp_spectra.constants import Branch
from dkp_spectra.exceptions import NonPositiveParameter, UnknownFigure
from dkp_spectra.models.params import Params, make_params
from dkp_spectra.oracle.algebra import momentum_uncertainty_bound
from dkp_spectra.spectra.energies import (
    high_frequency_asymptote,
    level_spacing,
    natural_e_squared,
    spacing_limit,
    spin0_e_squared,
    unnatural_e_squared,
)
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

Rows = list[dict[str, Any]]


class FigureSettings(BaseModel):
    lam: float = 0.1
    omega: float = 1.0
    n_max: int = 50
    points: int = 201
    dx_range: tuple[float, float] = (0.2, 5.0)
    omega_range: tuple[float, float] = (1e-2, 1e4)

    class Config:
        frozen = True

    @validator("points", "n_max")
    def _positive(cls, value, field):
        if value < 1:
            raise NonPositiveParameter(field.name, value)
        return value


class FigureData(BaseModel):
    figure_id: int
    title: str
    columns: tuple[str, ...]
    rows: Rows

    class Config:
        frozen = True


def _sqrt_or_nan(value: float) -> float:
    return math.sqrt(value) if value > 0 else math.nan


def _natural(settings: FigureSettings, lam: float, omega: Optional[float] = None) -> Params:
    return make_params(m=1.0, omega=settings.omega if omega is None else omega, lam=lam)


def _omega_grid(settings: FigureSettings) -> np.ndarray:
    return np.geomspace(*settings.omega_range, settings.points)


def uncertainty_curves(settings: FigureSettings) -> FigureData:
    lam = abs(settings.lam)
    rows = [
        {
            "dx": float(dx),
            "dp_bound_ads": momentum_uncertainty_bound(float(dx), lam),
            "dp_bound_ds": momentum_uncertainty_bound(float(dx), -lam),
            "dp_bound_flat": momentum_uncertainty_bound(float(dx), 0.0),
        }
        for dx in np.linspace(*settings.dx_range, settings.points)
    ]
    return FigureData(
        figure_id=1,
        title="momentum uncertainty bound against position uncertainty",
        columns=("dx", "dp_bound_ads", "dp_bound_ds", "dp_bound_flat"),
        rows=rows,
    )


def spacing_curves(settings: FigureSettings) -> FigureData:
    deformed = _natural(settings, abs(settings.lam))
    flat = _natural(settings, 0.0)
    limit = spacing_limit(deformed)
    rows = [
        {
            "N": N,
            "spacing_flat": level_spacing(flat, 0, N),
            "spacing_deformed": level_spacing(deformed, 0, N),
            "limit": limit,
        }
        for N in range(settings.n_max + 1)
    ]
    return FigureData(
        figure_id=2,
        title="energy spacing E(N+1) - E(N) at J = 0",
        columns=("N", "spacing_flat", "spacing_deformed", "limit"),
        rows=rows,
    )


def ground_shell_energies(settings: FigureSettings) -> FigureData:
    params = _natural(settings, settings.lam)
    rows = [
        {
            "N": N,
            "E_spin0": _sqrt_or_nan(spin0_e_squared(params, N, 0)),
            "E_spin1_natural": _sqrt_or_nan(natural_e_squared(params, N, 0)),
        }
        for N in range(settings.n_max + 1)
    ]
    return FigureData(
        figure_id=3,
        title="E_{N,0} for spin 0 and natural parity spin 1",
        columns=("N", "E_spin0", "E_spin1_natural"),
        rows=rows,
    )


def _unnatural_pair(params: Params, N: int, J: int) -> tuple[float, float]:
    return (
        _sqrt_or_nan(unnatural_e_squared(params, N, J, Branch.PLUS)),
        _sqrt_or_nan(unnatural_e_squared(params, N, J, Branch.MINUS)),
    )


def unnatural_energy_curves(settings: FigureSettings, figure_id: int, N: int, J: int) -> FigureData:
    asymptote = high_frequency_asymptote(N, J) if J > 0 else None
    rows = []
    for omega in _omega_grid(settings):
        plus, minus = _unnatural_pair(_natural(settings, settings.lam, float(omega)), N, J)
        rows.append({"omega": float(omega), "E_plus": plus, "E_minus": minus, "asymptote": asymptote})
    return FigureData(
        figure_id=figure_id,
        title=f"unnatural parity E+ and E- against omega at (N, J) = ({N}, {J})",
        columns=("omega", "E_plus", "E_minus", "asymptote"),
        rows=rows,
    )


def unnatural_correction_curves(settings: FigureSettings, figure_id: int, N: int, J: int) -> FigureData:
    """Deformation part of E+ and E-: E(lambda) - E(0) at the same omega."""
    rows = []
    for omega in _omega_grid(settings):
        plus, minus = _unnatural_pair(_natural(settings, settings.lam, float(omega)), N, J)
        flat_plus, flat_minus = _unnatural_pair(_natural(settings, 0.0, float(omega)), N, J)
        rows.append({"omega": float(omega), "dE_plus": plus - flat_plus, "dE_minus": minus - flat_minus})
    return FigureData(
        figure_id=figure_id,
        title=f"deformation correction to E+ and E- against omega at (N, J) = ({N}, {J})",
        columns=("omega", "dE_plus", "dE_minus"),
        rows=rows,
    )


FIGURES: dict[int, Callable[[FigureSettings], FigureData]] = {
    1: uncertainty_curves,
    2: spacing_curves,
    3: ground_shell_energies,
    4: lambda settings: unnatural_energy_curves(settings, 4, N=1, J=0),
    5: lambda settings: unnatural_energy_curves(settings, 5, N=2, J=1),
    6: lambda settings: unnatural_correction_curves(settings, 6, N=1, J=0),
    7: lambda settings: unnatural_correction_curves(settings, 7, N=2, J=1),
}


def figure_data(figure_id: int, settings: FigureSettings = FigureSettings()) -> FigureData:
    if figure_id not in FIGURES:
        raise UnknownFigure(figure_id, sorted(FIGURES))
    data = FIGURES[figure_id](settings)
    logger.debug(f"Figure {figure_id}: {len(data.rows)} rows")
    return data
