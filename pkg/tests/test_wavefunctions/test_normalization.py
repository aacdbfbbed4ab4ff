import math

import pytest
from scipy.special import beta

from dkp_spectra.constants import Branch, NormConvention, Sector
from dkp_spectra.exceptions import DeSitterUnsupported, InvalidQuantumNumbers
from dkp_spectra.models.params import make_params
from dkp_spectra.spectra.energies import energy_spin0, energy_spin1_unnatural
from dkp_spectra.wavefunctions.normalization import (
    component_norms,
    normalize,
    orthogonality_check,
    orthogonality_convergence,
)
from dkp_spectra.wavefunctions.radial import radial_grid, spin0_components, unnatural_components

TEST_LAMBDA = 0.1
TEST_MU = 10.0


@pytest.fixture
def ads_params():
    return make_params(m=1.0, omega=1.0, lam=TEST_LAMBDA)


@pytest.fixture
def ground_state(ads_params):
    E = energy_spin0(ads_params, 0, 0).E
    return spin0_components(ads_params, 0, 0, E, radial_grid(ads_params, 64))


def _ground_profile_norm() -> float:
    # integral of (1 - lambda r^2)^mu r^2 dr over the domain
    return beta(1.5, TEST_MU + 1.0) / (2.0 * TEST_LAMBDA**1.5)


def test_component_norms_match_beta_integral(ground_state):
    norms = component_norms(ground_state)
    assert norms["F"] == pytest.approx(_ground_profile_norm(), rel=1e-10)
    assert norms["G"] == pytest.approx(_ground_profile_norm(), rel=1e-10)
    assert norms["H"] == 0.0


def test_l2_normalization(ground_state):
    normalized = normalize(ground_state, NormConvention.L2)
    assert normalized.normalized
    assert normalized.norm_convention is NormConvention.L2
    assert sum(component_norms(normalized).values()) == pytest.approx(1.0, rel=1e-10)
    # the sampled arrays are rescaled together with the constant
    ratio = normalized["F"][10] / ground_state["F"][10]
    assert ratio == pytest.approx(normalized.normalization_constant)


def test_dkp_normalization(ground_state):
    normalized = normalize(ground_state, NormConvention.DKP)
    # 2 int F G r^2 dr with G = (E / mc^2) F and E = mc^2 on the ground level
    expected = 1.0 / math.sqrt(2.0 * _ground_profile_norm())
    assert normalized.normalization_constant == pytest.approx(expected, rel=1e-10)


def test_normalization_is_idempotent(ground_state):
    once = normalize(ground_state)
    twice = normalize(once)
    assert twice.normalization_constant == pytest.approx(once.normalization_constant, rel=1e-10)


def test_unnatural_l2_normalization(ads_params):
    plus = energy_spin1_unnatural(ads_params, 0, 1, Branch.PLUS).E
    components = unnatural_components(
        ads_params, 0, 1, (plus, None), 1.0, 0.0, radial_grid(ads_params, 64)
    )
    normalized = normalize(components, NormConvention.L2)
    assert sum(component_norms(normalized).values()) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("J", [0, 1, 2])
def test_orthogonality(ads_params, J):
    for n in range(5):
        for m in range(n + 1, 5):
            assert abs(orthogonality_check(ads_params, Sector.SPIN0, J, n, m)) < 1e-10
        assert orthogonality_check(ads_params, Sector.SPIN0, J, n, n) > 0.0


def test_orthogonality_diagonal_matches_beta(ads_params):
    a, b = 0.5, TEST_MU - 0.5
    expected = 2.0 ** (a + b + 1.0) * beta(a + 1.0, b + 1.0)
    assert orthogonality_check(ads_params, Sector.SPIN1_NATURAL, 0, 0, 0) == pytest.approx(
        expected, rel=1e-12
    )


def test_orthogonality_convergence(ads_params):
    history = orthogonality_convergence(ads_params, Sector.SPIN0, 1, 2, 5, orders=(8, 32, 128))
    assert [order for order, _ in history] == [8, 32, 128]
    assert abs(history[-1][1]) < 1e-10


def test_orthogonality_rejects_bad_input(ads_params):
    with pytest.raises(InvalidQuantumNumbers):
        orthogonality_check(ads_params, Sector.SPIN0, 0, -1, 0)
    with pytest.raises(DeSitterUnsupported):
        orthogonality_check(ads_params.dual(), Sector.SPIN0, 0, 0, 1)
