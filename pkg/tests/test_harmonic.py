import math

import numpy as np
import pytest

from chanadapt.basis import sh_basis_matrix
from chanadapt.errors import DomainError
from chanadapt.harmonic import (HarmonicConfig, harmonic_band_power, harmonic_matrix,
                                harmonic_row_names)


def test_evaluate_mode_is_basis_matrix(ten_ten_64):
    m = harmonic_matrix(ten_ten_64, HarmonicConfig(mode="evaluate"))
    assert np.array_equal(m.matrix, sh_basis_matrix(ten_ten_64, 4))
    assert m.method == "harmonic"
    assert m.metadata["mode"] == "evaluate"


@pytest.mark.parametrize("n_channels", [19, 21, 22, 26, 64])
def test_shape_does_not_depend_on_channel_count(ten_ten_64, n_channels):
    src = ten_ten_64.subset(ten_ten_64.labels[:n_channels]) \
        if n_channels != 64 else ten_ten_64
    m = harmonic_matrix(src, HarmonicConfig(mode="evaluate"))
    assert m.shape == (25, n_channels)
    assert len(m.target_descriptor) == 25


def test_row_names():
    names = harmonic_row_names(2)
    assert names == ["Y0+0", "Y1-1", "Y1+0", "Y1+1", "Y2-2", "Y2-1", "Y2+0", "Y2+1", "Y2+2"]


def test_constant_field_coefficients(ten_ten_64):
    # v = 1 equals Y00 * 2 sqrt(pi), all other coefficients zero; needs a
    # montage with C_s >= 25 so the coefficients are identified
    m = harmonic_matrix(ten_ten_64, HarmonicConfig(mode="least_squares", ridge=1e-10))
    coeffs = m.matrix @ np.ones(64)
    assert coeffs[0] == pytest.approx(2.0 * math.sqrt(math.pi), abs=1e-6)
    assert np.max(np.abs(coeffs[1:])) < 1e-6


def test_underdetermined_montage_still_reconstructs(ten_twenty_19):
    # with C_s < 25 the coefficients are not identified, but the
    # synthesized field at the electrodes is
    basis = sh_basis_matrix(ten_twenty_19, 4)
    with pytest.warns(UserWarning):
        m = harmonic_matrix(ten_twenty_19, HarmonicConfig(mode="least_squares", ridge=1e-10))
    coeffs = m.matrix @ np.ones(19)
    assert np.max(np.abs(basis.T @ coeffs - 1.0)) < 1e-6


def test_round_trip_without_ridge_on_standard_montage(ten_ten_64):
    basis = sh_basis_matrix(ten_ten_64, 4)
    m = harmonic_matrix(ten_ten_64, HarmonicConfig(mode="least_squares", ridge=0.0))
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal(25)
        worst = max(worst, float(np.max(np.abs(m.matrix @ (basis.T @ a) - a))))
    assert worst < 1e-8


def test_round_trip_default_ridge_on_dense_montage(fibonacci_64):
    # quasi-uniform coverage keeps the Gram matrix well above the ridge
    basis = sh_basis_matrix(fibonacci_64, 4)
    m = harmonic_matrix(fibonacci_64, HarmonicConfig(mode="least_squares"))
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal(25)
        worst = max(worst, float(np.max(np.abs(m.matrix @ (basis.T @ a) - a))))
    assert worst < 1e-8


def test_round_trip_default_ridge_on_head_cap(ten_ten_64):
    # head coverage leaves the smallest Gram eigenvalue ~2.4e-3, so the
    # ridge bias dominates: recovery is ~ridge/lambda_min per unit
    # coefficient, far above the dense-montage figure
    basis = sh_basis_matrix(ten_ten_64, 4)
    m = harmonic_matrix(ten_ten_64, HarmonicConfig(mode="least_squares"))
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        a = rng.standard_normal(25)
        worst = max(worst, float(np.max(np.abs(m.matrix @ (basis.T @ a) - a))))
    assert worst < 1e-4


def test_least_squares_warns_when_underdetermined(ten_twenty_19):
    with pytest.warns(UserWarning, match="underdetermined"):
        harmonic_matrix(ten_twenty_19, HarmonicConfig(mode="least_squares"))


def test_config_validation():
    with pytest.raises(DomainError):
        HarmonicConfig(l_max=-1)
    with pytest.raises(DomainError):
        HarmonicConfig(mode="synthesize")
    with pytest.raises(DomainError):
        HarmonicConfig(ridge=-1.0)


def test_band_power_zero_input():
    assert np.array_equal(harmonic_band_power(np.zeros((25, 7))), np.zeros(5))


def test_band_power_single_degree():
    coeffs = np.zeros((25, 3))
    coeffs[0] = 2.0
    power = harmonic_band_power(coeffs)
    assert power[0] == pytest.approx(12.0)
    assert np.all(power[1:] == 0.0)


def test_band_power_partitions_energy():
    rng = np.random.default_rng(9)
    coeffs = rng.standard_normal((16, 11))
    power = harmonic_band_power(coeffs)
    assert power.shape == (4,)
    assert power.sum() == pytest.approx(float(np.sum(coeffs**2)), rel=1e-12)
    assert np.all(power >= 0.0)


def test_band_power_shape_mismatch():
    with pytest.raises(DomainError):
        harmonic_band_power(np.zeros((24, 3)))
