import math

import pytest

from dkp_spectra.constants import Branch, Sector
from dkp_spectra.exceptions import (
    DeSitterUnsupported,
    FlatSpaceUnsupported,
    JZero,
    NegativeESquared,
    NoRootInBracket,
)
from dkp_spectra.models.params import QuantumState, make_params
from dkp_spectra.spectra.energies import (
    critical_level,
    delta_split,
    deviation_ratio,
    e_squared_from_epsilon,
    energy,
    energy_spin0,
    energy_spin1_natural,
    energy_spin1_unnatural,
    epsilon_from_energy,
    first_order_expansion,
    high_frequency_asymptote,
    level_spacing,
    natural_e_squared,
    nonrelativistic_limits,
    radial_eigenvalue,
    spacing_limit,
    spin0_e_squared,
    unnatural_e_squared,
    unnatural_energy_by_rootfind,
    unnatural_transcendental_residual,
)

TEST_LAMBDA = 0.1


@pytest.fixture
def ads_params():
    return make_params(m=1.0, omega=1.0, lam=TEST_LAMBDA)


@pytest.fixture
def ds_params():
    return make_params(m=1.0, omega=1.0, lam=-TEST_LAMBDA)


def test_spin0_reference_level(ads_params):
    result = energy_spin0(ads_params, 1, 0)
    assert result.E_squared == pytest.approx(5.8, rel=1e-14)
    assert result.E == pytest.approx(math.sqrt(5.8), rel=1e-14)
    assert result.state.N == 2
    assert result.branch is None
    assert result.flags == []
    assert result.breakdown.total == pytest.approx(result.E_squared)
    assert result.breakdown.confinement_term == pytest.approx(0.8)


@pytest.mark.parametrize(
    "N, J, expected",
    [(0, 0, 1.0), (1, 1, 3.1), (2, 2, 5.2), (3, 1, 8.3)],
)
def test_spin0_e_squared(ads_params, N, J, expected):
    assert spin0_e_squared(ads_params, N, J) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "n, J, expected",
    [(0, 0, 3.1), (0, 1, 5.2), (1, 0, 7.9)],
)
def test_natural_e_squared(ads_params, n, J, expected):
    assert energy_spin1_natural(ads_params, n, J).E_squared == pytest.approx(expected, rel=1e-14)
    assert natural_e_squared(ads_params, 2 * n + J, J) == pytest.approx(expected, rel=1e-14)


def test_delta_split_reference(ads_params):
    assert delta_split(ads_params, 1, 1) == pytest.approx(8.531, abs=5e-4)


def test_unnatural_branches(ads_params):
    plus = energy_spin1_unnatural(ads_params, 0, 1, Branch.PLUS)
    minus = energy_spin1_unnatural(ads_params, 0, 1, Branch.MINUS)
    assert plus.E_squared - minus.E_squared == pytest.approx(2.0 * delta_split(ads_params, 1, 1))
    assert minus.E_squared == pytest.approx(3.229, abs=5e-4)
    assert plus.branch == Branch.PLUS
    assert minus.state.sector == Sector.SPIN1_UNNATURAL_MINUS
    assert minus.breakdown.delta_split < 0
    assert unnatural_e_squared(ads_params, 1, 1, Branch.MINUS) == pytest.approx(minus.E_squared)


def test_unnatural_j_zero_is_flagged(ads_params):
    result = energy_spin1_unnatural(ads_params, 1, 0, Branch.PLUS)
    assert "unnatural_j_zero" in result.flags


@pytest.mark.parametrize("branch", [Branch.PLUS, Branch.MINUS])
@pytest.mark.parametrize("n, J", [(0, 1), (1, 2), (2, 1)])
def test_closed_form_solves_transcendental_relation(ads_params, branch, n, J):
    closed = energy_spin1_unnatural(ads_params, n, J, branch)
    residual = unnatural_transcendental_residual(ads_params, closed.E, closed.state.N, J, branch)
    assert abs(residual) < 1e-10 * closed.E_squared

    rootfind = unnatural_energy_by_rootfind(ads_params, n, J, branch)
    assert rootfind.E == pytest.approx(closed.E, rel=1e-12)
    assert "rootfind" in rootfind.flags


def test_rootfind_with_bad_bracket(ads_params):
    with pytest.raises(NoRootInBracket) as exc_info:
        unnatural_energy_by_rootfind(ads_params, 0, 1, Branch.MINUS, bracket=(0.0, 0.5))
    assert "No sign change" in str(exc_info.value)


def test_negative_e_squared_in_de_sitter(ds_params):
    with pytest.raises(NegativeESquared) as exc_info:
        energy_spin0(ds_params, 10, 0)
    assert exc_info.value.exit_code == 3
    assert exc_info.value.e_squared == pytest.approx(-3.0)
    assert exc_info.value.N == 20


def test_critical_level(ads_params, ds_params):
    assert critical_level(ds_params, 0) == 20
    assert spin0_e_squared(ds_params, 18, 0) > 0
    assert critical_level(ads_params, 0) is None
    assert critical_level(make_params(m=1.0, omega=1.0, lam=0.0), 0) is None
    level = critical_level(ds_params, 1, Sector.SPIN1_NATURAL)
    assert (level - 1) % 2 == 0
    assert natural_e_squared(ds_params, level, 1) <= 0
    assert natural_e_squared(ds_params, level - 2, 1) > 0


def test_level_spacing(ads_params):
    assert level_spacing(ads_params, 0, 0) == pytest.approx(math.sqrt(3.3) - 1.0, rel=1e-14)
    flat = make_params(m=1.0, omega=1.0, lam=0.0)
    assert level_spacing(flat, 0, 4) == pytest.approx(math.sqrt(11.0) - 3.0, rel=1e-14)


def test_spacing_decreases_toward_limit(ads_params):
    limit = spacing_limit(ads_params)
    assert limit == pytest.approx(math.sqrt(TEST_LAMBDA))
    spacings = [level_spacing(ads_params, 0, N) for N in range(60)]
    assert all(a > b for a, b in zip(spacings, spacings[1:]))
    assert all(spacing > limit for spacing in spacings)
    assert level_spacing(ads_params, 0, 1e7) == pytest.approx(limit, rel=1e-5)


def test_spacing_limit_needs_anti_de_sitter(ds_params):
    with pytest.raises(DeSitterUnsupported):
        spacing_limit(ds_params)
    with pytest.raises(FlatSpaceUnsupported):
        spacing_limit(make_params(m=1.0, omega=1.0, lam=0.0))


def test_first_order_expansion():
    params = make_params(m=1.0, omega=1.0, lam=1e-5)
    for N in range(6):
        exact = math.sqrt(spin0_e_squared(params, N, 0))
        assert first_order_expansion(params, N) == pytest.approx(exact, abs=1e-9)
        flat = math.sqrt(1.0 + 2.0 * N)
        shift = first_order_expansion(params, N) - flat
        assert shift == pytest.approx(deviation_ratio(params, N), rel=1e-6, abs=1e-15)


@pytest.mark.parametrize("sector", [Sector.SPIN0, Sector.SPIN1_NATURAL])
def test_nonrelativistic_limits(sector):
    params = make_params(m=1e4, omega=1.0, lam=0.1)
    state = QuantumState(n=1, J=0, sector=sector)
    binding = energy(params, state).E - params.rest_energy
    assert nonrelativistic_limits(params, 1, 0, sector) == pytest.approx(binding, rel=1e-3)


def test_high_frequency_asymptote():
    assert high_frequency_asymptote(2, 1) == pytest.approx(math.sqrt(10.0))
    with pytest.raises(JZero):
        high_frequency_asymptote(1, 0)


def test_radial_eigenvalue(ads_params):
    assert radial_eigenvalue(ads_params, 2, 1) == pytest.approx(16.3, rel=1e-14)
    assert radial_eigenvalue(ads_params, 0, 0) == pytest.approx(3.0, rel=1e-14)


@pytest.mark.parametrize(
    "sector",
    [
        Sector.SPIN0,
        Sector.SPIN1_NATURAL,
        Sector.SPIN1_UNNATURAL_PLUS,
        Sector.SPIN1_UNNATURAL_MINUS,
    ],
)
@pytest.mark.parametrize("n, J", [(0, 1), (2, 2)])
def test_every_sector_shares_the_radial_eigenvalue(ads_params, sector, n, J):
    E = energy(ads_params, QuantumState(n=n, J=J, sector=sector)).E
    epsilon = epsilon_from_energy(ads_params, E, J, sector)
    assert epsilon == pytest.approx(radial_eigenvalue(ads_params, n, J), rel=1e-12)


@pytest.mark.parametrize("sector", [Sector.SPIN0, Sector.SPIN1_NATURAL])
def test_e_squared_from_epsilon_inverts(ads_params, sector):
    epsilon = radial_eigenvalue(ads_params, 1, 2)
    E = energy(ads_params, QuantumState(n=1, J=2, sector=sector)).E
    assert e_squared_from_epsilon(ads_params, epsilon, sector) == pytest.approx(E**2, rel=1e-13)


def test_e_squared_from_epsilon_rejects_unnatural(ads_params):
    with pytest.raises(ValueError):
        e_squared_from_epsilon(ads_params, 5.1, Sector.SPIN1_UNNATURAL_PLUS)
