import numpy as np
import pytest

from dkp_spectra.constants import Branch, Sector
from dkp_spectra.exceptions import (
    DeSitterUnsupported,
    DomainError,
    InvalidBranchSelection,
    JZero,
)
from dkp_spectra.models.params import coupling_coefficients, make_params
from dkp_spectra.nu.jacobi import jacobi_eval
from dkp_spectra.spectra.energies import (
    energy_spin0,
    energy_spin1_natural,
    energy_spin1_unnatural,
    radial_eigenvalue,
)
from dkp_spectra.wavefunctions.radial import (
    CLOSURE_RESIDUALS,
    NATURAL_COMPONENTS,
    SPIN0_COMPONENTS,
    UNNATURAL_COMPONENTS,
    UnnaturalMixing,
    count_nodes,
    first_order_components,
    linear_system_residual,
    natural_components,
    radial_equation_residual,
    radial_F,
    radial_grid,
    spin0_components,
    unnatural_components,
    unnatural_system_residuals,
)

TEST_LAMBDA = 0.1


@pytest.fixture
def ads_params():
    return make_params(m=1.0, omega=1.0, lam=TEST_LAMBDA)


@pytest.fixture
def grid(ads_params):
    return radial_grid(ads_params, samples=400)


def test_radial_grid_stays_inside_domain(ads_params, grid):
    radius = ads_params.domain_radius
    assert grid[0] > 0.0
    assert grid[-1] < radius
    assert np.all(np.diff(grid) > 0)


def test_ground_profile(ads_params):
    r = np.array([0.5, 1.0, 2.0])
    expected = (1.0 - TEST_LAMBDA * r**2) ** 5.0
    np.testing.assert_allclose(radial_F(ads_params, 0, 0, r), expected, rtol=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_profile_has_n_nodes(ads_params, grid, n):
    assert count_nodes(radial_F(ads_params, n, 1, grid)) == n


def test_profile_vanishes_at_the_wall(ads_params):
    radius = ads_params.domain_radius
    edge = radial_F(ads_params, 1, 0, np.array([0.999999 * radius]))
    assert abs(edge[0]) < 1e-25


def test_profile_outside_domain(ads_params):
    with pytest.raises(DomainError):
        radial_F(ads_params, 0, 0, np.array([ads_params.domain_radius]))
    with pytest.raises(DeSitterUnsupported):
        radial_F(ads_params.dual(), 0, 0, np.array([1.0]))


@pytest.mark.parametrize("n, J", [(0, 0), (1, 1), (2, 3)])
def test_profile_solves_radial_equation(ads_params, n, J):
    epsilon = radial_eigenvalue(ads_params, n, J)

    def profile(r):
        return radial_F(ads_params, n, J, r)

    assert radial_equation_residual(ads_params, J, epsilon, profile) < 1e-7
    assert radial_equation_residual(ads_params, J, epsilon + 1.0, profile) > 1e-3


def test_spin0_components(ads_params, grid):
    E = energy_spin0(ads_params, 1, 1).E
    components = spin0_components(ads_params, 1, 1, E, grid)
    assert tuple(components.components) == SPIN0_COMPONENTS
    assert components.leading_component == "F"
    assert not components.normalized
    np.testing.assert_allclose(components["G"], E * components["F"])
    assert np.all(components["H"] == 0.0)
    assert components.state.N == 3


@pytest.mark.parametrize("n, J", [(0, 1), (1, 1), (2, 2)])
def test_spin0_first_order_relation(ads_params, n, J):
    E = energy_spin0(ads_params, n, J).E
    components = spin0_components(ads_params, n, J, E, radial_grid(ads_params, 16))
    assert linear_system_residual(components) < 1e-6


@pytest.mark.parametrize("n, J", [(0, 1), (1, 2)])
def test_natural_first_order_relation(ads_params, n, J):
    E = energy_spin1_natural(ads_params, n, J).E
    components = natural_components(ads_params, n, J, E, radial_grid(ads_params, 16))
    assert tuple(components.components) == NATURAL_COMPONENTS
    assert linear_system_residual(components) < 1e-6


def test_linear_relation_detects_wrong_energy(ads_params):
    E = energy_spin0(ads_params, 1, 1).E
    components = spin0_components(ads_params, 1, 1, 1.1 * E, radial_grid(ads_params, 16))
    assert linear_system_residual(components) > 1e-3


@pytest.mark.parametrize("branch", [Branch.PLUS, Branch.MINUS])
def test_unnatural_components(ads_params, grid, branch):
    plus = energy_spin1_unnatural(ads_params, 1, 1, Branch.PLUS).E
    minus = energy_spin1_unnatural(ads_params, 1, 1, Branch.MINUS).E
    C_plus, C_minus = (1.0, 0.0) if branch is Branch.PLUS else (0.0, 1.0)
    components = unnatural_components(ads_params, 1, 1, (plus, minus), C_plus, C_minus, grid)
    assert components.sector is Sector.unnatural(branch)
    assert components.energy == (plus if branch is Branch.PLUS else minus)
    assert tuple(components.components) == UNNATURAL_COMPONENTS

    residuals = unnatural_system_residuals(components)
    assert set(residuals) == {
        "F_plus",
        "G_plus",
        "F_minus",
        "G_minus",
        f"R_{branch.value}",
        *CLOSURE_RESIDUALS,
    }
    assert residuals[f"R_{branch.value}"] < 1e-7


def test_unnatural_components_only_need_the_selected_energy(ads_params, grid):
    minus = energy_spin1_unnatural(ads_params, 0, 1, Branch.MINUS).E
    components = unnatural_components(ads_params, 0, 1, (None, minus), 0.0, 1.0, grid)
    assert components.energy == minus
    with pytest.raises(InvalidBranchSelection):
        unnatural_components(ads_params, 0, 1, (None, minus), 1.0, 0.0, grid)


@pytest.mark.parametrize("C_plus, C_minus", [(1.0, 1.0), (0.0, 0.0)])
def test_unnatural_components_need_a_pure_branch(ads_params, grid, C_plus, C_minus):
    with pytest.raises(InvalidBranchSelection) as exc_info:
        unnatural_components(ads_params, 0, 1, (3.0, 2.0), C_plus, C_minus, grid)
    assert "Exactly one of" in str(exc_info.value)


def test_unnatural_components_reject_j_zero(ads_params, grid):
    with pytest.raises(JZero):
        unnatural_components(ads_params, 0, 0, (3.0, 2.0), 1.0, 0.0, grid)


def test_mixing_is_an_involution(ads_params):
    mixing = UnnaturalMixing(params=ads_params, n=0, J=2, E=2.5)
    first, second = np.array([1.0, -2.0]), np.array([0.5, 3.0])
    back = mixing.transform(*mixing.transform(first, second))
    np.testing.assert_allclose(back[0], first, atol=1e-14)
    np.testing.assert_allclose(back[1], second, atol=1e-14)
    assert mixing.kappa == pytest.approx(np.sqrt(1.0 + mixing.k_mix**2))


def test_count_nodes_ignores_roundoff():
    values = np.array([1.0, 0.5, 1e-20, -1e-20, 0.4, -0.3, -0.2])
    assert count_nodes(values) == 1


def _table_with_zeta_slips(xi, zeta, E, mc2, k, kp1):
    return {
        "alpha_plus": zeta * mc2 * k + xi * E * kp1,
        "alpha_minus": zeta * mc2 * k - xi * E * kp1,
        "beta_plus": -zeta * E * k + xi * mc2 * kp1,
        "beta_minus": -zeta * E * k - xi * mc2 * kp1,
        "gamma_plus": xi * mc2 * k + zeta * E * kp1,
        "gamma_minus": xi * mc2 * k - zeta * E * kp1,
        "delta_plus": xi * E * k + zeta * mc2 * kp1,
        "delta_minus": xi * E * k - zeta * mc2 * kp1,
    }


def _half_h_plus1(params, n, J, r):
    """Half of the spin 0 H+1 with C_n = 1, in the (m omega/hbar + (n+J+1) lambda) form."""
    lam, mu = params.lam, params.mu
    u = 1.0 - lam * r**2
    lower = jacobi_eval(n - 1, J + 1.5, mu + 0.5, 1.0 - 2.0 * lam * r**2)
    return (
        coupling_coefficients(J).xi
        * params.hbar
        / (params.m * params.c)
        * u ** (0.5 * (mu + 1.0))
        * (2.0 * lam * r**2) ** (0.5 * J)
        * (params.m * params.omega / params.hbar + (n + J + 1) * lam)
        * r
        * lower
    )


@pytest.mark.parametrize("n, J", [(0, 1), (1, 2), (2, 3)])
@pytest.mark.parametrize("C_plus, C_minus", [(1.0, 0.0), (0.0, 1.0)])
def test_closed_form_matches_first_order_components(ads_params, grid, n, J, C_plus, C_minus):
    branch = Branch.PLUS if C_plus else Branch.MINUS
    E = energy_spin1_unnatural(ads_params, n, J, branch).E
    mixing = UnnaturalMixing(params=ads_params, n=n, J=J, E=E)
    closed = mixing.closed_form(grid, C_plus, C_minus)
    direct = first_order_components(ads_params, n, J, E, grid, C_plus, C_minus)
    for name, values in direct.items():
        np.testing.assert_allclose(
            closed[name], values, rtol=1e-12, atol=1e-14 * np.max(np.abs(values))
        )


@pytest.mark.parametrize("J", [1, 2, 3])
def test_coefficient_table_zeta_signs(ads_params, J):
    E = energy_spin1_unnatural(ads_params, 1, J, Branch.PLUS).E
    mixing = UnnaturalMixing(params=ads_params, n=1, J=J, E=E)
    args = (mixing.xi, mixing.zeta, E, mixing.mc2, mixing.k_mix, mixing.kappa + 1.0)
    slipped = _table_with_zeta_slips(*args)
    corrected = _table_with_zeta_slips(mixing.xi, -mixing.zeta, *args[2:])
    table = mixing.coefficients
    for name in ("alpha_plus", "beta_minus", "gamma_minus", "delta_minus"):
        assert table[name] == pytest.approx(slipped[name], rel=1e-14)
    # these entries flip the sign of their zeta term
    for name in ("beta_plus", "gamma_plus", "delta_plus", "alpha_minus"):
        assert table[name] == pytest.approx(corrected[name], rel=1e-14)
        assert table[name] != pytest.approx(slipped[name], rel=1e-3)


@pytest.mark.parametrize("n, J", [(1, 1), (2, 1), (1, 3)])
def test_spin0_h_plus1_closed_form(ads_params, grid, n, J):
    E = energy_spin0(ads_params, n, J).E
    components = spin0_components(ads_params, n, J, E, grid)
    half = _half_h_plus1(ads_params, n, J, grid)
    np.testing.assert_allclose(
        components["H_plus1"], 2.0 * half, rtol=1e-9, atol=1e-12 * np.max(np.abs(half))
    )


@pytest.mark.parametrize("n, J", [(1, 1), (2, 2)])
def test_ladder_images_tail(ads_params, grid, n, J):
    E = energy_spin1_unnatural(ads_params, n, J, Branch.PLUS).E
    mixing = UnnaturalMixing(params=ads_params, n=n, J=J, E=E)
    first, second = mixing.ladder_images(grid)
    F = radial_F(ads_params, n, J, grid)
    tail = (
        2.0 * ads_params.m * ads_params.c / coupling_coefficients(J).xi
    ) * _half_h_plus1(ads_params, n, J, grid)
    np.testing.assert_allclose(
        mixing.gamma_1(grid) * F - first, tail, rtol=1e-9, atol=1e-12 * np.max(np.abs(tail))
    )
    np.testing.assert_allclose(
        second - first, (mixing.gamma_2(grid) - mixing.gamma_1(grid)) * F, rtol=1e-12
    )


@pytest.mark.parametrize("n, J", [(0, 1), (1, 1), (0, 2)])
@pytest.mark.parametrize("branch", [Branch.PLUS, Branch.MINUS])
def test_unnatural_residuals(ads_params, grid, n, J, branch):
    plus = energy_spin1_unnatural(ads_params, n, J, Branch.PLUS).E
    minus = energy_spin1_unnatural(ads_params, n, J, Branch.MINUS).E
    C_plus, C_minus = (1.0, 0.0) if branch is Branch.PLUS else (0.0, 1.0)
    components = unnatural_components(ads_params, n, J, (plus, minus), C_plus, C_minus, grid)
    residuals = unnatural_system_residuals(components)
    for name in ("F_plus", "G_plus", "F_minus", "G_minus"):
        assert residuals[name] < 1e-6, name
    assert residuals[f"R_{branch.value}"] < 1e-5
    # H0 and phi relations stay open by about 0.3 with the shared eta
    for name in CLOSURE_RESIDUALS:
        assert residuals[name] > 0.05, name
