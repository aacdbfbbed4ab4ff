import math

import pytest

from dkp_spectra.constants import SI_ELEMENTARY_CHARGE, SI_HBAR
from dkp_spectra.exceptions import InvalidQuantumNumbers, NonPositiveParameter
from dkp_spectra.spectra.bounds import e_hbar_B, penning_bound

TEST_FIELD_TESLA = 6.0
TEST_LEVEL = 1e10
# minimal momentum uncertainty quoted for a 6 T trap at level 1e10, kg m/s
REFERENCE_DELTA_P = 3.25e-36


def test_e_hbar_B():
    assert e_hbar_B(TEST_FIELD_TESLA) == pytest.approx(1e-52, rel=1e-15)
    exact = e_hbar_B(TEST_FIELD_TESLA, exact_constants=True)
    assert exact == pytest.approx(SI_ELEMENTARY_CHARGE * SI_HBAR * TEST_FIELD_TESLA)
    # CODATA and the rounded product differ by a few percent
    assert exact / 1e-52 == pytest.approx(1.0, abs=0.05)


def test_penning_bound_reference():
    result = penning_bound(TEST_FIELD_TESLA, TEST_LEVEL)
    assert result.delta_p_min_max == pytest.approx(REFERENCE_DELTA_P, rel=0.05)
    assert result.lambda_max == pytest.approx(9.48e-4, rel=0.01)
    assert result.delta_p_min_max == pytest.approx(SI_HBAR * math.sqrt(result.lambda_max))
    assert result.inputs.e_hbar_B == pytest.approx(1e-52)
    assert not result.inputs.exact_constants


def test_penning_bound_scales_with_threshold():
    default = penning_bound(TEST_FIELD_TESLA, TEST_LEVEL)
    hbar_omega = default.inputs.delta_e_threshold
    halved = penning_bound(TEST_FIELD_TESLA, TEST_LEVEL, delta_e_threshold=0.5 * hbar_omega)
    assert halved.lambda_max == pytest.approx(0.5 * default.lambda_max)


def test_penning_bound_tightens_with_level():
    lower = penning_bound(TEST_FIELD_TESLA, 1e8)
    higher = penning_bound(TEST_FIELD_TESLA, 1e10)
    assert higher.lambda_max < lower.lambda_max


def test_penning_bound_rejects_bad_input():
    with pytest.raises(InvalidQuantumNumbers) as exc_info:
        penning_bound(TEST_FIELD_TESLA, 0)
    assert "n_level=0" in str(exc_info.value)
    with pytest.raises(NonPositiveParameter):
        penning_bound(-1.0, TEST_LEVEL)
    with pytest.raises(NonPositiveParameter):
        penning_bound(TEST_FIELD_TESLA, TEST_LEVEL, delta_e_threshold=0.0)
