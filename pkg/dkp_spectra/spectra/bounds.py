from typing import Optional

import math

from pydantic import BaseModel, validator

from dkp_spectra.constants import (
    PENNING_REFERENCE_FIELD_TESLA,
    PENNING_ROUNDED_E_HBAR_B,
    SI_ELECTRON_MASS,
    SI_ELEMENTARY_CHARGE,
    SI_HBAR,
    SI_SPEED_OF_LIGHT,
)
from dkp_spectra.exceptions import InvalidQuantumNumbers, NonPositiveParameter
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)


class BoundInputs(BaseModel):
    B: float
    n_level: float
    # e*hbar*B in kg^2 m^2 s^-2, which equals m_e * hbar * omega_c
    e_hbar_B: float
    delta_e_threshold: float
    exact_constants: bool = False

    class Config:
        frozen = True

    @validator("B", "delta_e_threshold")
    def _positive(cls, value, field):
        if not value > 0:
            raise NonPositiveParameter(field.name, value)
        return value

    @validator("n_level")
    def _at_least_one(cls, value):
        if value < 1:
            raise InvalidQuantumNumbers(f"n_level={value} must be >= 1")
        return value


class BoundResult(BaseModel):
    # 1/m^2
    lambda_max: float
    # kg m/s
    delta_p_min_max: float
    inputs: BoundInputs

    class Config:
        frozen = True


def e_hbar_B(B_tesla: float, exact_constants: bool = False) -> float:
    """
    e*hbar*B, either from CODATA or from the rounded 1e-52 at 6 T scaled linearly in B.

    >>> round(e_hbar_B(12.0) / 1e-52, 12)
    2.0
    """
    if exact_constants:
        return SI_ELEMENTARY_CHARGE * SI_HBAR * B_tesla
    return PENNING_ROUNDED_E_HBAR_B * B_tesla / PENNING_REFERENCE_FIELD_TESLA


def penning_bound(
    B_tesla: float,
    n_level: float,
    delta_e_threshold: Optional[float] = None,
    exact_constants: bool = False,
) -> BoundResult:
    """
    Largest AdS deformation whose first-order shift of the n-th Landau-like level of an electron
    in a Penning trap stays below delta_e_threshold (default hbar*omega_c), and the matching
    minimal momentum uncertainty hbar*sqrt(lambda_max).

    With m*omega = e*B the first-order shift ratio inverts to
    lambda_max = (threshold / hbar omega_c) * 2 m omega sqrt(1 + 2N hbar omega/mc^2) / (hbar N (N+2)).
    """
    product = e_hbar_B(B_tesla, exact_constants)
    hbar_omega = product / SI_ELECTRON_MASS
    threshold = hbar_omega if delta_e_threshold is None else delta_e_threshold
    inputs = BoundInputs(
        B=B_tesla,
        n_level=n_level,
        e_hbar_B=product,
        delta_e_threshold=threshold,
        exact_constants=exact_constants,
    )
    N = float(n_level)
    relativistic = math.sqrt(1.0 + 2.0 * N * hbar_omega / (SI_ELECTRON_MASS * SI_SPEED_OF_LIGHT**2))
    # m*omega*hbar = e*hbar*B, so 2 m omega / hbar = 2 e hbar B / hbar^2
    lambda_max = (
        (threshold / hbar_omega) * 2.0 * product * relativistic / (SI_HBAR**2 * N * (N + 2.0))
    )
    delta_p = SI_HBAR * math.sqrt(lambda_max)
    logger.debug(f"Penning bound B={B_tesla} T, N={N:g}: lambda_max={lambda_max}, dP={delta_p}")
    return BoundResult(lambda_max=lambda_max, delta_p_min_max=delta_p, inputs=inputs)
