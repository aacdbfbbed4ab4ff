"""
Radial eigenfunctions of the oscillator on the AdS domain r in (0, 1/sqrt(lambda)).

Every sector shares the profile
    F(r) = (1 - lambda r^2)^(mu/2) (2 lambda r^2)^(J/2) P_n^(J+1/2, mu-1/2)(1 - 2 lambda r^2)
and the remaining components follow from the first-order relations through the ladder operators
    L(kappa, +-) f = hbar sqrt(u) (f' + kappa f / r) +- m omega r f / sqrt(u),   u = 1 - lambda r^2,
applied to the analytic F and F'.
"""
from typing import Callable, Optional

import math

import numpy as np
from pydantic import BaseModel

from dkp_spectra.constants import (
    DEFAULT_WAVEFUNCTION_SAMPLES,
    FD6_FIRST_DERIVATIVE,
    FD6_SECOND_DERIVATIVE,
    WAVEFUNCTION_INSET_FACTOR,
    Branch,
    NormConvention,
    Sector,
)
from dkp_spectra.exceptions import InvalidBranchSelection, JZero
from dkp_spectra.models.params import (
    Params,
    QuantumState,
    coupling_coefficients,
    domain_interval,
    map_r_to_s,
)
from dkp_spectra.nu.jacobi import jacobi_deriv, jacobi_eval
from dkp_spectra.spectra.energies import epsilon_from_energy
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)

SPIN0_COMPONENTS = ("F", "G", "H", "H_plus1", "H_minus1")
NATURAL_COMPONENTS = ("F0", "G0", "H_plus1", "H_minus1")
UNNATURAL_COMPONENTS = ("phi", "H0", "F_plus", "G_plus", "F_minus", "G_minus")
CLOSURE_RESIDUALS = ("H0_closure", "phi_closure")


def radial_grid(
    params: Params,
    samples: int = DEFAULT_WAVEFUNCTION_SAMPLES,
    inset_factor: float = WAVEFUNCTION_INSET_FACTOR,
) -> np.ndarray:
    lower, upper = domain_interval(params, inset_factor)
    return np.linspace(lower, upper, samples)


class _Profile(BaseModel):
    u: np.ndarray
    # (1 - lambda r^2)^(mu/2) (2 lambda r^2)^(J/2)
    prefactor: np.ndarray
    P: np.ndarray
    dP: np.ndarray
    # P_{n-1}^(J+3/2, mu+1/2), zero for n = 0
    P_lower: np.ndarray

    class Config:
        arbitrary_types_allowed = True


def _profile(params: Params, n: int, J: int, r: np.ndarray) -> _Profile:
    params.require_anti_de_sitter("radial wavefunctions")
    s = np.atleast_1d(map_r_to_s(r, params.lam))
    lam, mu = params.lam, params.mu
    u = 1.0 - lam * r**2
    a, b = J + 0.5, mu - 0.5
    if n > 0:
        P_lower = jacobi_eval(n - 1, a + 1.0, b + 1.0, s)
    else:
        P_lower = np.zeros_like(s)
    return _Profile(
        u=u,
        prefactor=u ** (0.5 * mu) * (2.0 * lam * r**2) ** (0.5 * J),
        P=jacobi_eval(n, a, b, s),
        dP=jacobi_deriv(n, a, b, s),
        P_lower=P_lower,
    )


def _profile_and_derivative(
    params: Params, n: int, J: int, r: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    profile = _profile(params, n, J, r)
    F = profile.prefactor * profile.P
    lam = params.lam
    dF = F * (J / r - params.mu * lam * r / profile.u) + profile.prefactor * (
        -4.0 * lam * r
    ) * profile.dP
    return F, dF


def _ladder(
    params: Params, f: np.ndarray, df: np.ndarray, r: np.ndarray, kappa: float, sign: int
) -> np.ndarray:
    root_u = np.sqrt(1.0 - params.lam * r**2)
    return params.hbar * root_u * (df + kappa * f / r) + sign * params.m * params.omega * r * f / root_u


def radial_F(params: Params, n: int, J: int, r_samples: np.ndarray) -> np.ndarray:
    """Unnormalized profile F with C_n = 1."""
    r = np.atleast_1d(np.asarray(r_samples, dtype=float))
    profile = _profile(params, n, J, r)
    return profile.prefactor * profile.P


class UnnaturalMixing(BaseModel):
    """
    Spin-orbit mixing of (R+, R-) into (phi, H0), and the radial factors of the composite
    ladder images L(-J, -)R and L(J+1, -)R.
    """

    params: Params
    n: int
    J: int
    E: float

    class Config:
        frozen = True

    @property
    def mc2(self) -> float:
        return self.params.rest_energy

    @property
    def xi(self) -> float:
        return coupling_coefficients(self.J).xi

    @property
    def zeta(self) -> float:
        return coupling_coefficients(self.J).zeta

    @property
    def k_mix(self) -> float:
        return 2.0 * math.sqrt(self.J * (self.J + 1)) * self.E / self.mc2

    @property
    def kappa(self) -> float:
        return math.sqrt(1.0 + self.k_mix**2)

    @property
    def W(self) -> float:
        params = self.params
        return params.spin_orbit_factor * params.omega / (params.hbar * params.c**2)

    @property
    def epsilon_c(self) -> float:
        return (self.E**2 - self.mc2**2) / self.params.c

    @property
    def norm(self) -> float:
        return math.sqrt(2.0 * self.kappa * (self.kappa + 1.0))

    def transform(self, first: np.ndarray, second: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric orthogonal 2x2 map, its own inverse."""
        k, kappa = self.k_mix, self.kappa
        return (
            ((1.0 + kappa) * first + k * second) / self.norm,
            (k * first - (1.0 + kappa) * second) / self.norm,
        )

    @property
    def coefficients(self) -> dict[str, float]:
        """
        Coefficient table of the closed form, before division by norm * epsilon_c.

        R+ feeds (F+, G+, F-, G-) with (alpha+, beta+, gamma+, delta+); R- feeds them with
        (delta-, gamma-, beta-, alpha-). The ladder image of L(-J, -) carries F+ and G+, the one
        of L(J+1, -) carries F- and G-.
        """
        xi, zeta, E, mc2, k, kp1 = self.xi, self.zeta, self.E, self.mc2, self.k_mix, self.kappa + 1
        return {
            "alpha_plus": zeta * mc2 * k + xi * E * kp1,
            "alpha_minus": -zeta * mc2 * k - xi * E * kp1,
            "beta_plus": zeta * E * k + xi * mc2 * kp1,
            "beta_minus": -zeta * E * k - xi * mc2 * kp1,
            "gamma_plus": xi * mc2 * k - zeta * E * kp1,
            "gamma_minus": xi * mc2 * k - zeta * E * kp1,
            "delta_plus": xi * E * k - zeta * mc2 * kp1,
            "delta_minus": xi * E * k - zeta * mc2 * kp1,
        }

    def closed_form(
        self, r: np.ndarray, C_plus: float, C_minus: float
    ) -> dict[str, np.ndarray]:
        """F+, G+, F- and G- from the coefficient table and the composite ladder images."""
        w = self.coefficients
        first, second = self.ladder_images(r)
        scale = self.norm * self.epsilon_c
        return {
            "F_plus": (C_plus * w["alpha_plus"] + C_minus * w["delta_minus"]) * first / scale,
            "G_plus": (C_plus * w["beta_plus"] + C_minus * w["gamma_minus"]) * first / scale,
            "F_minus": (C_plus * w["gamma_plus"] + C_minus * w["beta_minus"]) * second / scale,
            "G_minus": (C_plus * w["delta_plus"] + C_minus * w["alpha_minus"]) * second / scale,
        }

    def gamma_1(self, r: np.ndarray) -> np.ndarray:
        params = self.params
        return -2.0 * params.m * params.omega * r / np.sqrt(1.0 - params.lam * r**2)

    def gamma_2(self, r: np.ndarray) -> np.ndarray:
        root_u = np.sqrt(1.0 - self.params.lam * r**2)
        return (2 * self.J + 1) * self.params.hbar * root_u / r + self.gamma_1(r)

    def gamma_3(self, r: np.ndarray) -> np.ndarray:
        params = self.params
        root_u = np.sqrt(1.0 - params.lam * r**2)
        return params.lam * r * root_u * (self.n + params.mu + self.J + 1.0)

    def ladder_images(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """L(-J, -) and L(J+1, -) applied to the unit profile, from the composite form."""
        profile = _profile(self.params, self.n, self.J, r)
        tail = 2.0 * self.params.hbar * self.gamma_3(r) * profile.P_lower
        first = profile.prefactor * (self.gamma_1(r) * profile.P - tail)
        second = profile.prefactor * (self.gamma_2(r) * profile.P - tail)
        return first, second


def _spin0_arrays(params: Params, n: int, J: int, E: float, r: np.ndarray) -> dict:
    F, dF = _profile_and_derivative(params, n, J, r)
    mc2, c = params.rest_energy, params.c
    coupling = coupling_coefficients(J)
    return {
        "F": F,
        "G": (E / mc2) * F,
        "H": np.zeros_like(F),
        "H_plus1": -(c * coupling.xi / mc2) * _ladder(params, F, dF, r, -J, 1),
        "H_minus1": (c * coupling.zeta / mc2) * _ladder(params, F, dF, r, J + 1, 1),
    }


def _natural_arrays(params: Params, n: int, J: int, E: float, r: np.ndarray) -> dict:
    F, dF = _profile_and_derivative(params, n, J, r)
    mc2, c = params.rest_energy, params.c
    coupling = coupling_coefficients(J)
    return {
        "F0": F,
        "G0": (E / mc2) * F,
        "H_plus1": -(c * coupling.zeta / mc2) * _ladder(params, F, dF, r, -J, 1),
        "H_minus1": -(c * coupling.xi / mc2) * _ladder(params, F, dF, r, J + 1, 1),
    }


def _unnatural_arrays(
    params: Params, n: int, J: int, E: float, r: np.ndarray, C_plus: float, C_minus: float
) -> dict:
    mixing = UnnaturalMixing(params=params, n=n, J=J, E=E)
    profile = radial_F(params, n, J, r)
    phi, H0 = mixing.transform(C_plus * profile, C_minus * profile)
    return {"phi": phi, "H0": H0, **mixing.closed_form(r, C_plus, C_minus)}


def first_order_components(
    params: Params, n: int, J: int, E: float, r: np.ndarray, C_plus: float, C_minus: float
) -> dict[str, np.ndarray]:
    """
    F+, G+, F- and G- straight from the first-order relations: the mixing map applied to the
    ladder images of R+ and R-, then the 2x2 coupling matrices over epsilon_c.
    """
    mixing = UnnaturalMixing(params=params, n=n, J=J, E=E)
    first, second = mixing.ladder_images(np.atleast_1d(np.asarray(r, dtype=float)))
    L1_phi, L1_H0 = mixing.transform(C_plus * first, C_minus * first)
    L2_phi, L2_H0 = mixing.transform(C_plus * second, C_minus * second)
    xi, zeta, mc2, eps = mixing.xi, mixing.zeta, mixing.mc2, mixing.epsilon_c
    return {
        "F_plus": (xi * E * L1_phi + zeta * mc2 * L1_H0) / eps,
        "G_plus": (xi * mc2 * L1_phi + zeta * E * L1_H0) / eps,
        "F_minus": (-zeta * E * L2_phi + xi * mc2 * L2_H0) / eps,
        "G_minus": (-zeta * mc2 * L2_phi + xi * E * L2_H0) / eps,
    }


def evaluate_components(
    params: Params,
    sector: Sector,
    n: int,
    J: int,
    E: float,
    r: np.ndarray,
    C_plus: float = 1.0,
    C_minus: float = 0.0,
) -> dict[str, np.ndarray]:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if sector is Sector.SPIN0:
        return _spin0_arrays(params, n, J, E, r)
    if sector is Sector.SPIN1_NATURAL:
        return _natural_arrays(params, n, J, E, r)
    return _unnatural_arrays(params, n, J, E, r, C_plus, C_minus)


class RadialComponents(BaseModel):
    sector: Sector
    params: Params
    n: int
    J: int
    energy: float
    r: np.ndarray
    components: dict[str, np.ndarray]
    normalization_constant: float = 1.0
    norm_convention: Optional[NormConvention] = None
    C_plus: float = 1.0
    C_minus: float = 0.0

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def normalized(self) -> bool:
        return self.norm_convention is not None

    @property
    def state(self) -> QuantumState:
        return QuantumState(n=self.n, J=self.J, sector=self.sector)

    @property
    def leading_component(self) -> str:
        return next(iter(self.components))

    def __getitem__(self, name: str) -> np.ndarray:
        return self.components[name]

    def evaluate(self, r: np.ndarray) -> dict[str, np.ndarray]:
        """Components at arbitrary radii, including the normalization constant."""
        raw = evaluate_components(
            self.params, self.sector, self.n, self.J, self.energy, r, self.C_plus, self.C_minus
        )
        return {name: self.normalization_constant * values for name, values in raw.items()}

    def with_normalization(self, constant: float, convention: NormConvention) -> "RadialComponents":
        scale = constant / self.normalization_constant
        return self.copy(
            update={
                "components": {name: scale * v for name, v in self.components.items()},
                "normalization_constant": constant,
                "norm_convention": convention,
            }
        )


def _build(
    params: Params,
    sector: Sector,
    n: int,
    J: int,
    E: float,
    r_samples: np.ndarray,
    C_plus: float = 1.0,
    C_minus: float = 0.0,
) -> RadialComponents:
    r = np.atleast_1d(np.asarray(r_samples, dtype=float))
    components = evaluate_components(params, sector, n, J, E, r, C_plus, C_minus)
    return RadialComponents(
        sector=sector,
        params=params,
        n=n,
        J=J,
        energy=E,
        r=r,
        components=components,
        C_plus=C_plus,
        C_minus=C_minus,
    )


def spin0_components(
    params: Params, n: int, J: int, E: float, r_samples: np.ndarray
) -> RadialComponents:
    return _build(params, Sector.SPIN0, n, J, E, r_samples)


def natural_components(
    params: Params, n: int, J: int, E: float, r_samples: np.ndarray
) -> RadialComponents:
    return _build(params, Sector.SPIN1_NATURAL, n, J, E, r_samples)


def unnatural_components(
    params: Params,
    n: int,
    J: int,
    E_branch_pair: tuple[Optional[float], Optional[float]],
    C_plus: float,
    C_minus: float,
    r_samples: np.ndarray,
) -> RadialComponents:
    """
    Components of a pure R+ (C_minus = 0) or pure R- (C_plus = 0) state. E_branch_pair holds
    (E+, E-); only the energy of the selected branch is used.
    """
    if J == 0:
        raise JZero("unnatural_components")
    if (C_plus != 0.0) == (C_minus != 0.0):
        raise InvalidBranchSelection(C_plus, C_minus)
    branch = Branch.PLUS if C_plus != 0.0 else Branch.MINUS
    E = E_branch_pair[0] if branch is Branch.PLUS else E_branch_pair[1]
    if E is None:
        raise InvalidBranchSelection(C_plus, C_minus)
    return _build(params, Sector.unnatural(branch), n, J, E, r_samples, C_plus, C_minus)


def count_nodes(values: np.ndarray, rtol: float = 1e-12) -> int:
    """Sign changes, ignoring samples that vanish to rtol of the peak."""
    values = np.asarray(values, dtype=float)
    significant = values[np.abs(values) > rtol * np.max(np.abs(values))]
    return int(np.count_nonzero(np.diff(np.sign(significant))))


def interior_grid(params: Params, samples: int = 64) -> np.ndarray:
    """Points well inside the domain where shifted finite-difference stencils stay valid."""
    radius = params.domain_radius
    return np.linspace(0.05 * radius, 0.9 * radius, samples)


def _first_derivative(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    total = np.zeros_like(x)
    for offset, weight in enumerate(FD6_FIRST_DERIVATIVE, start=1):
        total += weight * (fn(x + offset * h) - fn(x - offset * h))
    return total / h


def _second_derivative(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    total = FD6_SECOND_DERIVATIVE[0] * fn(x)
    for offset, weight in enumerate(FD6_SECOND_DERIVATIVE[1:], start=1):
        total += weight * (fn(x + offset * h) + fn(x - offset * h))
    return total / h**2


def _numeric_ladder(
    params: Params,
    fn: Callable[[np.ndarray], np.ndarray],
    r: np.ndarray,
    kappa: float,
    sign: int,
) -> np.ndarray:
    h = 1e-3 * params.domain_radius
    return _ladder(params, fn(r), _first_derivative(fn, r, h), r, kappa, sign)


def _relative(residual: np.ndarray, *terms: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(term))) for term in terms)
    return float(np.max(np.abs(residual))) / scale if scale > 0 else float(np.max(np.abs(residual)))


def radial_equation_residual(
    params: Params,
    J: int,
    epsilon: float,
    fn: Callable[[np.ndarray], np.ndarray],
    r: Optional[np.ndarray] = None,
) -> float:
    """
    Relative residual of -chi'' + [J(J+1) lambda cot^2 + (eta/lambda) tan^2] chi = (epsilon + lambda) chi
    in t = arcsin(sqrt(lambda) r)/sqrt(lambda), chi = sqrt(lambda) r F.
    """
    r = interior_grid(params) if r is None else np.asarray(r, dtype=float)
    lam = params.lam
    root = math.sqrt(lam)

    def chi(t: np.ndarray) -> np.ndarray:
        radius = np.sin(root * t) / root
        return root * radius * fn(radius)

    t = np.arcsin(root * r) / root
    h = 1e-3 * (0.5 * math.pi / root)
    theta = root * t
    potential = J * (J + 1) * lam / np.tan(theta) ** 2 + (params.eta / lam) * np.tan(theta) ** 2
    values = chi(t)
    lhs = -_second_derivative(chi, t, h) + potential * values
    rhs = (epsilon + lam) * values
    return _relative(lhs - rhs, rhs)


def linear_system_residual(components: RadialComponents, r: Optional[np.ndarray] = None) -> float:
    """
    Relative residual of mc^2 F - E G against the ladder operators acting on H+1 and H-1
    (spin 0 and natural parity).
    """
    params, J, E = components.params, components.J, components.energy
    r = interior_grid(params) if r is None else np.asarray(r, dtype=float)
    coupling = coupling_coefficients(J)
    mc2, c = params.rest_energy, params.c
    values = components.evaluate(r)

    def component(name: str) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: components.evaluate(x)[name]

    if components.sector is Sector.SPIN0:
        F, G = values["F"], values["G"]
        rhs = c * (
            -coupling.xi * _numeric_ladder(params, component("H_plus1"), r, J + 2, -1)
            + coupling.zeta * _numeric_ladder(params, component("H_minus1"), r, 1 - J, -1)
        )
    else:
        F, G = values["F0"], values["G0"]
        rhs = c * (
            -coupling.xi * _numeric_ladder(params, component("H_minus1"), r, 1 - J, -1)
            - coupling.zeta * _numeric_ladder(params, component("H_plus1"), r, J + 2, -1)
        )
    lhs = mc2 * F - E * G
    # both sides vanish for the spin 0 ground state, where E = mc^2
    return _relative(lhs - rhs, lhs, rhs, mc2 * F)


def unnatural_system_residuals(
    components: RadialComponents, r: Optional[np.ndarray] = None
) -> dict[str, float]:
    """
    Relative residuals of the four first-order relations tying (F+-, G+-) to the ladder images of
    (phi, H0), and of the decoupled radial equation for the populated R with the eigenvalue
    implied by the energy. The CLOSURE_RESIDUALS entries measure the two remaining relations
    for H0 and phi; they are informational.
    """
    params, J, E = components.params, components.J, components.energy
    r = interior_grid(params) if r is None else np.asarray(r, dtype=float)
    coupling = coupling_coefficients(J)
    xi, zeta = coupling.xi, coupling.zeta
    mc2, c = params.rest_energy, params.c
    values = components.evaluate(r)

    def component(name: str) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: components.evaluate(x)[name]

    L1_phi = _numeric_ladder(params, component("phi"), r, -J, -1)
    L1_H0 = _numeric_ladder(params, component("H0"), r, -J, -1)
    L2_phi = _numeric_ladder(params, component("phi"), r, J + 1, -1)
    L2_H0 = _numeric_ladder(params, component("H0"), r, J + 1, -1)
    F_plus, G_plus = values["F_plus"], values["G_plus"]
    F_minus, G_minus = values["F_minus"], values["G_minus"]
    residuals = {
        "F_plus": _relative(mc2 * F_plus - E * G_plus + zeta * c * L1_H0, mc2 * F_plus, E * G_plus),
        "G_plus": _relative(mc2 * G_plus - E * F_plus + xi * c * L1_phi, mc2 * G_plus, E * F_plus),
        "F_minus": _relative(
            mc2 * F_minus - E * G_minus + xi * c * L2_H0, mc2 * F_minus, E * G_minus
        ),
        "G_minus": _relative(
            mc2 * G_minus - E * F_minus - zeta * c * L2_phi, mc2 * G_minus, E * F_minus
        ),
    }
    # mc^2 H0 and mc^2 phi against the raising ladders of (F+, F-) and (G+, G-); these do not
    # close with eta = (m omega/hbar)(m omega/hbar - lambda), so they are reported, not enforced
    H0, phi = values["H0"], values["phi"]
    L_F_plus = c * zeta * _numeric_ladder(params, component("F_plus"), r, J + 2, 1)
    L_F_minus = c * xi * _numeric_ladder(params, component("F_minus"), r, 1 - J, 1)
    L_G_plus = c * xi * _numeric_ladder(params, component("G_plus"), r, J + 2, 1)
    L_G_minus = c * zeta * _numeric_ladder(params, component("G_minus"), r, 1 - J, 1)
    residuals["H0_closure"] = _relative(
        mc2 * H0 + L_F_plus + L_F_minus, mc2 * H0, L_F_plus, L_F_minus
    )
    residuals["phi_closure"] = _relative(
        mc2 * phi + L_G_plus - L_G_minus, mc2 * phi, L_G_plus, L_G_minus
    )
    epsilon = epsilon_from_energy(params, E, J, components.sector)
    coefficient = components.C_plus if components.sector.branch is Branch.PLUS else components.C_minus
    key = f"R_{components.sector.branch.value}"
    residuals[key] = radial_equation_residual(
        params,
        J,
        epsilon,
        lambda x: coefficient * components.normalization_constant * radial_F(params, components.n, J, x),
        r,
    )
    return residuals
