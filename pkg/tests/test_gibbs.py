"""Thermal-state construction and imaginary-time correlators."""

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_hermitian
from fidsus.errors import (
    DimensionMismatchError,
    NonPositiveBetaError,
    TauOutOfRangeError,
)
from fidsus.gibbs import (
    build_gibbs,
    correlation_G,
    family_at_beta,
    make_family,
    thermal_average,
)


def test_two_level_partition_function():
    ens = build_gibbs(np.diag([0.0, 1.0]).astype(complex), beta=2.0)
    assert ens.log_z == pytest.approx(np.log(1.0 + np.exp(-2.0)), abs=1e-15)
    p = ens.populations
    np.testing.assert_allclose(
        p, [1.0, np.exp(-2.0)] / (1.0 + np.exp(-2.0)), rtol=1e-15
    )


def test_populations_normalized_and_log_consistent():
    rng = np.random.default_rng(5)
    for _ in range(25):
        dim = int(rng.integers(2, 14))
        beta = float(10.0 ** rng.uniform(-2, 2))
        ens = build_gibbs(random_hermitian(rng, dim), beta)
        assert ens.populations.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.all(ens.populations >= 0.0)
        np.testing.assert_allclose(
            np.exp(ens.log_populations), ens.populations, atol=1e-300, rtol=1e-13
        )
        # log populations always finite, even if populations underflow
        assert np.all(np.isfinite(ens.log_populations))


def test_extreme_beta_no_overflow():
    rng = np.random.default_rng(6)
    h = random_hermitian(rng, 6)
    ens = build_gibbs(h, beta=1e8)
    assert np.isfinite(ens.log_z)
    assert ens.populations[0] == pytest.approx(1.0, abs=1e-12)
    assert ens.underflow_count > 0
    cold = build_gibbs(h, beta=1e-8)
    np.testing.assert_allclose(cold.populations, np.full(6, 1 / 6), rtol=1e-6)


def test_beta_validation():
    for beta in (0.0, -1.0, np.nan):
        with pytest.raises(NonPositiveBetaError):
            build_gibbs(np.eye(2), beta)


def test_thermal_average_against_expm():
    rng = np.random.default_rng(11)
    for _ in range(10):
        dim = int(rng.integers(2, 9))
        t = random_hermitian(rng, dim)
        s = random_hermitian(rng, dim)
        beta = float(rng.uniform(0.2, 3.0))
        fam = make_family(t, s, beta)
        w = expm(-beta * t)
        ref = np.real(np.trace(w @ s) / np.trace(w))
        assert thermal_average(fam, fam.s_eig) == pytest.approx(ref, abs=1e-11)
        assert fam.s_mean == pytest.approx(ref, abs=1e-11)


def test_correlation_time_reversal_symmetry():
    rng = np.random.default_rng(13)
    fam = make_family(random_hermitian(rng, 5), random_hermitian(rng, 5), 2.3)
    for tau in (0.0, 0.31, 1.0, 1.9):
        assert correlation_G(fam, tau) == pytest.approx(
            correlation_G(fam, fam.beta - tau), rel=1e-12, abs=1e-14
        )


def test_correlation_at_zero_is_variance():
    rng = np.random.default_rng(14)
    fam = make_family(random_hermitian(rng, 6), random_hermitian(rng, 6), 1.1)
    p = fam.populations
    s2 = thermal_average(fam, fam.s_eig @ fam.s_eig)
    var = s2 - fam.s_mean**2
    assert correlation_G(fam, 0.0) == pytest.approx(var, rel=1e-12)


def test_correlation_against_heisenberg_picture():
    rng = np.random.default_rng(15)
    t = random_hermitian(rng, 5)
    s = random_hermitian(rng, 5)
    beta = 1.7
    fam = make_family(t, s, beta)
    w = expm(-beta * t)
    z = np.real(np.trace(w))
    for tau in (0.2, 0.8, 1.5):
        s_tau = expm(tau * t) @ s @ expm(-tau * t)
        ref = np.real(np.trace(w @ s_tau @ s)) / z - fam.s_mean**2
        assert correlation_G(fam, tau) == pytest.approx(ref, rel=1e-9, abs=1e-11)


def test_correlation_tau_range():
    fam = make_family(np.diag([0.0, 1.0]), np.eye(2), 1.0)
    for tau in (-0.1, 1.1):
        with pytest.raises(TauOutOfRangeError):
            correlation_G(fam, tau)


def test_family_at_beta_matches_fresh_build():
    rng = np.random.default_rng(16)
    t = random_hermitian(rng, 7)
    s = random_hermitian(rng, 7)
    base = make_family(t, s, 0.7, particle_count=3)
    moved = family_at_beta(base, 2.9)
    fresh = make_family(t, s, 2.9, particle_count=3)
    np.testing.assert_array_equal(moved.eigenvalues, fresh.eigenvalues)
    np.testing.assert_allclose(moved.populations, fresh.populations, rtol=1e-15)
    assert moved.s_mean == pytest.approx(fresh.s_mean, abs=1e-14)
    assert moved.particle_count == 3


def test_make_family_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        make_family(np.eye(3), np.eye(2), 1.0)


def test_thermal_average_shape_check():
    fam = make_family(np.diag([0.0, 1.0]), np.eye(2), 1.0)
    with pytest.raises(DimensionMismatchError):
        thermal_average(fam, np.zeros((2, 3)))
