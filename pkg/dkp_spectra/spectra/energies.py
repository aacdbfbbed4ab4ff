from typing import Callable, Optional

import math

from pydantic import BaseModel
from scipy.optimize import brentq

from dkp_spectra.constants import ROOT_RESIDUAL_TOLERANCE, Branch, Sector
from dkp_spectra.exceptions import (
    DeSitterUnsupported,
    FlatSpaceUnsupported,
    JZero,
    NegativeESquared,
    NegativeRadicand,
    NoRootInBracket,
)
from dkp_spectra.models.params import Params, QuantumState
from dkp_spectra.utils.telemetry import publish_count_metric, setup_logger

logger = setup_logger(__name__)

# offset of N in the flat term and constant in the confinement bracket, per sector family
_FLAT_OFFSET = {"spin0": 0.0, "natural": 1.0, "unnatural": 2.5}
_CONFINEMENT_SHIFT = {"spin0": 1.0, "natural": 0.0, "unnatural": 0.5}


class EnergyBreakdown(BaseModel):
    rest_term: float
    flat_term: float
    confinement_term: float
    rotational_term: float
    spin_orbit_term: float = 0.0
    delta_split: float = 0.0

    class Config:
        frozen = True

    @property
    def total(self) -> float:
        return (
            self.rest_term
            + self.flat_term
            + self.confinement_term
            + self.rotational_term
            + self.spin_orbit_term
            + self.delta_split
        )


class EnergyResult(BaseModel):
    E_squared: float
    E: float
    breakdown: EnergyBreakdown
    branch: Optional[Branch] = None
    state: QuantumState
    flags: list[str] = []

    class Config:
        frozen = True


def _family(sector: Sector) -> str:
    if sector.is_unnatural:
        return "unnatural"
    return "natural" if sector is Sector.SPIN1_NATURAL else "spin0"


def _breakdown(params: Params, N: float, J: int, family: str) -> EnergyBreakdown:
    """Every term but the unnatural splitting, which the caller adds."""
    hbar, m, c, omega, lam = params.hbar, params.m, params.c, params.omega, params.lam
    hc2 = (hbar * c) ** 2
    spin_orbit = 0.0
    if family == "unnatural":
        spin_orbit = 2.0 * (hbar * omega * params.spin_orbit_factor) ** 2 * J * (J + 1)
    return EnergyBreakdown(
        rest_term=(m * c**2) ** 2,
        flat_term=2.0 * hbar * m * omega * c**2 * (N + _FLAT_OFFSET[family]),
        confinement_term=lam * hc2 * ((N + 1.0) ** 2 - _CONFINEMENT_SHIFT[family]),
        rotational_term=-lam * hc2 * J * (J + 1),
        spin_orbit_term=spin_orbit,
    )


def spin0_e_squared(params: Params, N: float, J: int) -> float:
    """E^2 = m^2c^4 + 2 hbar m omega c^2 N + lambda hbar^2 c^2 [(N+1)^2 - J(J+1) - 1]"""
    return _breakdown(params, N, J, "spin0").total


def natural_e_squared(params: Params, N: float, J: int) -> float:
    return _breakdown(params, N, J, "natural").total


def delta_split(params: Params, N: float, J: int) -> float:
    """
    Spin-orbit splitting between the unnatural branches, E+^2 - E-^2 = 2 * delta.

    >>> from dkp_spectra.models.params import make_params
    >>> round(delta_split(make_params(m=1.0, omega=1.0, lam=0.1), 1, 1), 3)
    8.531
    """
    hbar, m, c, omega, lam = params.hbar, params.m, params.c, params.omega, params.lam
    a = params.spin_orbit_factor
    b0 = (2 * J + 1) ** 2
    b1 = 4 * J * (J + 1)
    x = hbar * omega / (m * c**2)
    bracket = (N + 1.0) ** 2 - J * (J + 1) - 0.5
    radicand = (
        1.0
        + (b1**2 / (4.0 * b0)) * (x * a) ** 2
        + (2.0 * b1 / b0) * (x * (N + 2.5) + lam * hbar**2 * bracket / (2.0 * (m * c) ** 2))
    )
    if radicand < 0:
        raise NegativeRadicand(radicand, N, J, omega, lam)
    return hbar * m * omega * c**2 * a * (2 * J + 1) * math.sqrt(radicand)


def unnatural_e_squared(params: Params, N: float, J: int, branch: Branch) -> float:
    return _breakdown(params, N, J, "unnatural").total + branch.sign * delta_split(params, N, J)


def _result(
    params: Params,
    state: QuantumState,
    breakdown: EnergyBreakdown,
    branch: Optional[Branch] = None,
    flags: Optional[list[str]] = None,
    e_squared: Optional[float] = None,
) -> EnergyResult:
    e_squared = breakdown.total if e_squared is None else e_squared
    if e_squared <= 0:
        raise NegativeESquared(e_squared, state.sector.value, state.N, state.J, params.lam)
    return EnergyResult(
        E_squared=e_squared,
        E=math.sqrt(e_squared),
        breakdown=breakdown,
        branch=branch,
        state=state,
        flags=list(state.flags) + list(flags or []),
    )


def energy_spin0(params: Params, n: int, J: int) -> EnergyResult:
    """
    >>> from dkp_spectra.models.params import make_params
    >>> round(energy_spin0(make_params(m=1.0, omega=1.0, lam=0.1), 1, 0).E_squared, 12)
    5.8
    """
    state = QuantumState(n=n, J=J, sector=Sector.SPIN0)
    return _result(params, state, _breakdown(params, state.N, J, "spin0"))


def energy_spin1_natural(params: Params, n: int, J: int) -> EnergyResult:
    state = QuantumState(n=n, J=J, sector=Sector.SPIN1_NATURAL)
    return _result(params, state, _breakdown(params, state.N, J, "natural"))


def energy_spin1_unnatural(params: Params, n: int, J: int, branch: Branch) -> EnergyResult:
    state = QuantumState(n=n, J=J, sector=Sector.unnatural(branch))
    if J == 0:
        logger.debug(f"Unnatural level requested at J = 0 (n={n}, branch={branch.value})")
    breakdown = _breakdown(params, state.N, J, "unnatural").copy(
        update={"delta_split": branch.sign * delta_split(params, state.N, J)}
    )
    return _result(params, state, breakdown, branch=branch)


def unnatural_transcendental_residual(
    params: Params, E: float, N: float, J: int, branch: Branch
) -> float:
    """
    (E^2 - m^2c^4)/(hbar omega) -+ a sqrt(m^2c^4 + 4J(J+1)E^2)
        - [mc^2(2N+5) + (lambda hbar c^2/omega)((N+1)^2 - J(J+1) - 1/2)]
    """
    hbar, m, c, omega, lam = params.hbar, params.m, params.c, params.omega, params.lam
    mc2 = m * c**2
    lhs = (E**2 - mc2**2) / (hbar * omega) - branch.sign * params.spin_orbit_factor * math.sqrt(
        mc2**2 + 4.0 * J * (J + 1) * E**2
    )
    rhs = mc2 * (2.0 * N + 5.0) + (lam * hbar * c**2 / omega) * (
        (N + 1.0) ** 2 - J * (J + 1) - 0.5
    )
    return lhs - rhs


def _expand_bracket(residual: Callable[[float], float], start: float) -> tuple[float, float]:
    upper = start
    for _ in range(200):
        if residual(upper) > 0:
            return 0.0, upper
        upper *= 2.0
    raise NoRootInBracket(0.0, upper, residual(0.0), residual(upper))


def unnatural_energy_by_rootfind(
    params: Params,
    n: int,
    J: int,
    branch: Branch,
    bracket: Optional[tuple[float, float]] = None,
) -> EnergyResult:
    """
    Solves the transcendental relation for E by Brent's method.

    Without an explicit bracket the search starts at E = 0, where the residual is negative, and
    doubles the upper end from mc^2 until it changes sign. In E^2 the residual is convex (or
    increasing), so the positive root found this way is the only one.
    """
    state = QuantumState(n=n, J=J, sector=Sector.unnatural(branch))
    N = state.N

    def residual(E: float) -> float:
        return unnatural_transcendental_residual(params, E, N, J, branch)

    if bracket is None:
        lower, upper = _expand_bracket(residual, params.rest_energy)
    else:
        lower, upper = bracket
    f_lower, f_upper = residual(lower), residual(upper)
    if f_lower * f_upper > 0:
        publish_count_metric("NoRootInBracket", dimensions={"sector": state.sector.value})
        raise NoRootInBracket(lower, upper, f_lower, f_upper)
    root = brentq(residual, lower, upper, xtol=1e-300, rtol=4.0 * 2.0**-52, maxiter=500)

    mc2 = params.rest_energy
    scale = max(root**2, mc2**2) / (params.hbar * params.omega)
    if abs(residual(root)) > ROOT_RESIDUAL_TOLERANCE * scale:
        logger.warning(
            f"Root residual {residual(root)} exceeds {ROOT_RESIDUAL_TOLERANCE} * {scale} "
            f"for {state.label}"
        )
    base = _breakdown(params, N, J, "unnatural")
    e_squared = root**2
    breakdown = base.copy(update={"delta_split": e_squared - base.total})
    return _result(params, state, breakdown, branch=branch, flags=["rootfind"], e_squared=e_squared)


def nonrelativistic_limits(params: Params, n: int, J: int, sector: Sector) -> float:
    """E - mc^2 to leading order in 1/c^2, for each sector."""
    state = QuantumState(n=n, J=J, sector=sector)
    N = state.N
    hbar, m, c, omega, lam = params.hbar, params.m, params.c, params.omega, params.lam
    deformation = lam * hbar**2 / (2.0 * m)
    family = _family(sector)
    bracket = (N + 1.0) ** 2 - J * (J + 1) - _CONFINEMENT_SHIFT[family]
    value = hbar * omega * (N + _FLAT_OFFSET[family]) + deformation * bracket
    if family == "unnatural":
        mc2 = m * c**2
        value += (hbar * omega) ** 2 / mc2 * params.spin_orbit_factor**2 * J * (J + 1)
        value += sector.branch.sign * delta_split(params, N, J) / (2.0 * mc2)
    return value


def _require_ads(params: Params, what: str) -> None:
    if params.is_flat:
        raise FlatSpaceUnsupported(what)
    if params.lam < 0:
        raise DeSitterUnsupported(what)


def level_spacing(params: Params, J: int, N: float) -> float:
    """
    E(N+1) - E(N) of the spin-0 closed form at fixed J, computed as
    (E2^2 - E1^2)/(E2 + E1) so that large N does not cancel.
    """
    lower = spin0_e_squared(params, N, J)
    upper = spin0_e_squared(params, N + 1, J)
    for value in (lower, upper):
        if value <= 0:
            raise NegativeESquared(value, Sector.SPIN0.value, N, J, params.lam)
    hbar, m, c = params.hbar, params.m, params.c
    gap = 2.0 * hbar * m * params.omega * c**2 + params.lam * (hbar * c) ** 2 * (2.0 * N + 3.0)
    return gap / (math.sqrt(upper) + math.sqrt(lower))


def spacing_limit(params: Params) -> float:
    """hbar c sqrt(lambda), the large N spacing on AdS."""
    _require_ads(params, "spacing_limit")
    return params.hbar * params.c * math.sqrt(params.lam)


def first_order_expansion(params: Params, N: float) -> float:
    """E_{N,0} to first order in lambda."""
    hbar, m, c = params.hbar, params.m, params.c
    root = math.sqrt((m * c**2) ** 2 + 2.0 * hbar * m * params.omega * c**2 * N)
    return root + params.lam * (hbar * c) ** 2 * N * (N + 2) / (2.0 * root)


def deviation_ratio(params: Params, N: float) -> float:
    """First-order shift of E_{N,0} in units of hbar omega."""
    hbar, m, c, omega = params.hbar, params.m, params.c, params.omega
    return (
        params.lam
        * hbar
        * N
        * (N + 2)
        / (2.0 * m * omega * math.sqrt(1.0 + 2.0 * hbar * omega * N / (m * c**2)))
    )


def high_frequency_asymptote(N: int, J: int) -> float:
    """
    Large omega limit of E- in natural units.

    >>> round(high_frequency_asymptote(2, 1), 5)
    3.16228
    """
    if J == 0:
        raise JZero("high_frequency_asymptote")
    return math.sqrt((N + 2) * (N + 3) / (J * (J + 1)))


def energy(params: Params, state: QuantumState) -> EnergyResult:
    if state.sector is Sector.SPIN0:
        return energy_spin0(params, state.n, state.J)
    if state.sector is Sector.SPIN1_NATURAL:
        return energy_spin1_natural(params, state.n, state.J)
    return energy_spin1_unnatural(params, state.n, state.J, state.sector.branch)


def sector_e_squared(params: Params, N: float, J: int, sector: Sector) -> float:
    if sector is Sector.SPIN0:
        return spin0_e_squared(params, N, J)
    if sector is Sector.SPIN1_NATURAL:
        return natural_e_squared(params, N, J)
    return unnatural_e_squared(params, N, J, sector.branch)


def critical_level(params: Params, J: int, sector: Sector = Sector.SPIN0) -> Optional[int]:
    """
    Smallest N (same parity as J) where the closed form stops giving a real energy in dS.
    None on AdS and in flat space, where E^2 grows with N.

    Past the top of the concave E^2(N) the failure set is an up-set, so a doubling search
    followed by bisection over k = (N - J)/2 finds it.
    """
    if params.lam >= 0:
        return None

    def fails(k: int) -> bool:
        try:
            return sector_e_squared(params, J + 2 * k, J, sector) <= 0
        except NegativeRadicand:
            return True

    if fails(0):
        return J
    low, high = 0, 1
    while not fails(high):
        low, high = high, high * 2
        if high > 2**62:
            return None
    while high - low > 1:
        middle = (low + high) // 2
        if fails(middle):
            high = middle
        else:
            low = middle
    return J + 2 * high


def radial_eigenvalue(params: Params, n: int, J: int) -> float:
    """
    Eigenvalue epsilon_n = lambda [3mu + (2mu+1)J + 4n(n+mu+J+1)] of the shared radial operator.
    """
    mu = params.mu
    return params.lam * (3.0 * mu + (2.0 * mu + 1.0) * J + 4.0 * n * (n + mu + J + 1.0))


def epsilon_from_energy(params: Params, E: float, J: int, sector: Sector) -> float:
    """Radial eigenvalue implied by an energy in the given sector."""
    hbar, m, c, omega = params.hbar, params.m, params.c, params.omega
    mc2 = m * c**2
    reduced = (E**2 - mc2**2) / (hbar * c) ** 2
    if sector is Sector.SPIN0:
        return reduced + 3.0 * m * omega / hbar
    if sector is Sector.SPIN1_NATURAL:
        return reduced + m * omega / hbar - params.lam
    splitting = mc2 - sector.branch.sign * math.sqrt(mc2**2 + 4.0 * J * (J + 1) * E**2)
    return (
        reduced
        + omega / (hbar * c**2) * params.spin_orbit_factor * splitting
        - 3.0 * m * omega / hbar
    )


def e_squared_from_epsilon(params: Params, epsilon: float, sector: Sector) -> float:
    """Inverse of epsilon_from_energy for the spin-0 and natural sectors."""
    hbar, m, c, omega = params.hbar, params.m, params.c, params.omega
    if sector is Sector.SPIN0:
        shift = 3.0 * m * omega / hbar
    elif sector is Sector.SPIN1_NATURAL:
        shift = m * omega / hbar - params.lam
    else:
        raise ValueError(f"{sector.value} needs a root search, not a linear inversion")
    return (m * c**2) ** 2 + (hbar * c) ** 2 * (epsilon - shift)
