import math

import pytest

from dkp_spectra.exceptions import NonPositiveParameter, UnknownFigure
from dkp_spectra.spectra.figures import FIGURES, FigureSettings, figure_data

TEST_SETTINGS = FigureSettings(n_max=10, points=21)


def test_every_figure_builds():
    assert sorted(FIGURES) == [1, 2, 3, 4, 5, 6, 7]
    for figure_id in FIGURES:
        data = figure_data(figure_id, TEST_SETTINGS)
        assert data.figure_id == figure_id
        assert data.rows
        assert list(data.rows[0]) == list(data.columns)


def test_uncertainty_curves():
    rows = figure_data(1, TEST_SETTINGS).rows
    assert len(rows) == 21
    for row in rows:
        assert row["dp_bound_ds"] < row["dp_bound_flat"] < row["dp_bound_ads"]
    # the AdS bound is smallest at dx = 1/sqrt(lambda)
    best = min(rows, key=lambda row: row["dp_bound_ads"])
    assert best["dx"] == pytest.approx(1.0 / math.sqrt(0.1), abs=0.25)


def test_spacing_curves():
    rows = figure_data(2, TEST_SETTINGS).rows
    assert [row["N"] for row in rows] == list(range(11))
    deformed = [row["spacing_deformed"] for row in rows]
    assert all(a > b for a, b in zip(deformed, deformed[1:]))
    assert all(value > rows[0]["limit"] for value in deformed)
    assert rows[0]["limit"] == pytest.approx(math.sqrt(0.1))
    assert rows[0]["spacing_flat"] == pytest.approx(math.sqrt(3.0) - 1.0)


def test_ground_shell_energies():
    rows = figure_data(3, TEST_SETTINGS).rows
    assert rows[2]["E_spin0"] == pytest.approx(math.sqrt(5.8))
    assert rows[0]["E_spin1_natural"] == pytest.approx(math.sqrt(3.1))


def test_unnatural_energy_curves():
    data = figure_data(5, TEST_SETTINGS)
    assert data.rows[0]["omega"] == pytest.approx(1e-2)
    assert data.rows[-1]["omega"] == pytest.approx(1e4)
    for row in data.rows:
        assert row["asymptote"] == pytest.approx(math.sqrt(10.0))
        # the spin-orbit factor 1 - lambda/(2 omega) changes sign at omega = 0.05
        if row["omega"] > 0.05:
            assert row["E_plus"] > row["E_minus"]
        else:
            assert row["E_plus"] < row["E_minus"]
    assert figure_data(4, TEST_SETTINGS).rows[0]["asymptote"] is None


def test_unnatural_correction_curves():
    rows = figure_data(7, TEST_SETTINGS).rows
    assert set(rows[0]) == {"omega", "dE_plus", "dE_minus"}
    flat = figure_data(7, FigureSettings(lam=0.0, n_max=10, points=5)).rows
    for row in flat:
        assert row["dE_plus"] == 0.0
        assert row["dE_minus"] == 0.0


def test_unknown_figure():
    with pytest.raises(UnknownFigure) as exc_info:
        figure_data(8)
    assert "available: [1, 2, 3, 4, 5, 6, 7]" in str(exc_info.value)


def test_settings_validation():
    with pytest.raises(NonPositiveParameter):
        FigureSettings(points=0)
