from typing import Optional, Union

import math
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, root_validator, validator

from dkp_spectra.constants import (
    SI_HBAR,
    SI_SPEED_OF_LIGHT,
    WAVEFUNCTION_INSET_FACTOR,
    Sector,
    Space,
    UnitSystem,
)
from dkp_spectra.exceptions import (
    DeSitterUnsupported,
    DomainError,
    FlatSpaceUnsupported,
    InvalidQuantumNumbers,
    NonPositiveParameter,
    SignMismatch,
    UnitMismatch,
)

ArrayLike = Union[float, np.ndarray]


def space_for_lambda(lam: float) -> Space:
    if lam > 0:
        return Space.ADS
    if lam < 0:
        return Space.DS
    return Space.FLAT


class DerivedParams(BaseModel):
    # dimensionless m*omega/(lambda*hbar)
    mu: float
    # (m*omega/hbar)(m*omega/hbar - lambda), 1/length^4
    eta: float

    class Config:
        frozen = True


class Params(BaseModel):
    """Physical constants, oscillator mass and frequency, and the signed deformation."""

    hbar: float = 1.0
    c: float = 1.0
    m: float
    omega: float
    # deformation lambda in 1/length^2, positive in AdS and negative in dS
    lam: float = 0.0
    space: Optional[Space] = None
    unit_system: UnitSystem = UnitSystem.NATURAL

    class Config:
        frozen = True

    @validator("m", "omega", "hbar", "c")
    def _strictly_positive(cls, value, field):
        if not value > 0 or not math.isfinite(value):
            raise NonPositiveParameter(field.name, value)
        return value

    @root_validator(skip_on_failure=True)
    def _space_matches_lambda(cls, values):
        lam = values["lam"]
        space = values.get("space") or space_for_lambda(lam)
        if space is not space_for_lambda(lam):
            raise SignMismatch(lam, space.value)
        values["space"] = space
        if values["unit_system"] is UnitSystem.NATURAL and (
            values["hbar"] != 1.0 or values["c"] != 1.0
        ):
            raise UnitMismatch(values["hbar"], values["c"])
        return values

    @property
    def is_flat(self) -> bool:
        return self.lam == 0.0

    @property
    def mu(self) -> float:
        if self.is_flat:
            raise FlatSpaceUnsupported("mu")
        return self.m * self.omega / (self.lam * self.hbar)

    @property
    def eta(self) -> float:
        k = self.m * self.omega / self.hbar
        return k * (k - self.lam)

    @property
    def derived(self) -> DerivedParams:
        return DerivedParams(mu=self.mu, eta=self.eta)

    @property
    def cosmological_constant(self) -> float:
        return -3.0 * self.lam

    @property
    def critical_lambda(self) -> float:
        """Deformation at which the unnatural spin-orbit splitting vanishes."""
        return 2.0 * self.m * self.omega / self.hbar

    @property
    def spin_orbit_factor(self) -> float:
        """1 - lambda*hbar/(2 m omega)"""
        return 1.0 - self.lam * self.hbar / (2.0 * self.m * self.omega)

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2

    @property
    def domain_radius(self) -> float:
        self.require_anti_de_sitter("the radial domain")
        return 1.0 / math.sqrt(self.lam)

    def require_anti_de_sitter(self, what: str) -> None:
        if self.is_flat:
            raise FlatSpaceUnsupported(what)
        if self.lam < 0:
            raise DeSitterUnsupported(what)

    def dual(self) -> "Params":
        """Same oscillator with lambda -> -lambda (AdS <-> dS)."""
        return self.copy(update={"lam": -self.lam, "space": space_for_lambda(-self.lam)})

    def with_updates(self, **changes) -> "Params":
        fields = self.dict()
        if "lam" in changes and "space" not in changes:
            fields["space"] = None
        fields.update(changes)
        return Params(**fields)


def make_params(
    m: float,
    omega: float,
    lam: float,
    space: Optional[Union[Space, str]] = None,
    unit_system: Union[UnitSystem, str] = UnitSystem.NATURAL,
) -> Params:
    """
    Builds validated parameters. The space tag is inferred from the sign of lambda when omitted.

    >>> make_params(m=1.0, omega=1.0, lam=0.1).mu
    10.0
    """
    unit_system = UnitSystem(unit_system)
    if isinstance(space, str):
        space = Space.get_member_by_value(space)
    if unit_system is UnitSystem.SI:
        return Params(
            hbar=SI_HBAR,
            c=SI_SPEED_OF_LIGHT,
            m=m,
            omega=omega,
            lam=lam,
            space=space,
            unit_system=unit_system,
        )
    return Params(m=m, omega=omega, lam=lam, space=space, unit_system=unit_system)


def _require_positive_lambda(lam: float, what: str) -> None:
    if lam == 0:
        raise FlatSpaceUnsupported(what)
    if lam < 0:
        raise DeSitterUnsupported(what)


def map_r_to_s(r: ArrayLike, lam: float) -> ArrayLike:
    """s = 1 - 2 lambda r^2 on the open domain r in (0, 1/sqrt(lambda))."""
    _require_positive_lambda(lam, "map_r_to_s")
    radius = 1.0 / math.sqrt(lam)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0) or np.any(r_arr >= radius):
        raise DomainError("r", r, 0.0, radius)
    s = 1.0 - 2.0 * lam * r_arr**2
    return float(s) if np.ndim(s) == 0 else s


def map_s_to_r(s: ArrayLike, lam: float) -> ArrayLike:
    _require_positive_lambda(lam, "map_s_to_r")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= -1.0) or np.any(s_arr >= 1.0):
        raise DomainError("s", s, -1.0, 1.0)
    r = np.sqrt((1.0 - s_arr) / (2.0 * lam))
    return float(r) if np.ndim(r) == 0 else r


def domain_interval(params: Params, inset_factor: float = WAVEFUNCTION_INSET_FACTOR):
    """Open radial interval [delta, R - delta] with delta = inset_factor * R."""
    radius = params.domain_radius
    delta = inset_factor * radius
    return delta, radius - delta


class CouplingCoefficients(BaseModel):
    xi: float
    zeta: float

    class Config:
        frozen = True


@lru_cache(maxsize=256)
def coupling_coefficients(J: int) -> CouplingCoefficients:
    """
    Angular coupling factors xi_J = sqrt((J+1)/(2J+1)) and zeta_J = sqrt(J/(2J+1)).

    >>> coupling_coefficients(0)
    CouplingCoefficients(xi=1.0, zeta=0.0)
    """
    if isinstance(J, bool) or int(J) != J or J < 0:
        raise InvalidQuantumNumbers(f"J={J} must be a nonnegative integer")
    J = int(J)
    return CouplingCoefficients(
        xi=math.sqrt((J + 1) / (2 * J + 1)),
        zeta=math.sqrt(J / (2 * J + 1)),
    )


class QuantumState(BaseModel):
    n: int
    J: int
    sector: Sector = Sector.SPIN0

    class Config:
        frozen = True

    @validator("n", "J")
    def _nonnegative(cls, value, field):
        if value < 0:
            raise InvalidQuantumNumbers(f"{field.name}={value} must be nonnegative")
        return value

    @property
    def N(self) -> int:
        return 2 * self.n + self.J

    @property
    def flags(self) -> list[str]:
        # the unnatural spin-orbit structure degenerates at J = 0 (k_mix = 0, kappa = 1)
        if self.sector.is_unnatural and self.J == 0:
            return ["unnatural_j_zero"]
        return []

    @property
    def label(self) -> str:
        return f"{self.sector.value}(n={self.n},J={self.J})"

    @classmethod
    def from_principal(cls, N: int, J: int, sector: Sector = Sector.SPIN0) -> "QuantumState":
        if N < J or (N - J) % 2:
            raise InvalidQuantumNumbers(f"N={N}, J={J} needs N >= J and N - J even")
        return cls(n=(N - J) // 2, J=J, sector=sector)
