"""Eigensolver and factorization checks against numpy oracles."""

import numpy as np
import pytest

from conftest import random_hermitian
from fidsus.errors import NotHermitianError, NotSquareError
from fidsus.linalg import (
    apply_spectral_function,
    eig_hermitian,
    psd_sqrt,
    singular_values_onesided,
    validate_hermitian,
)


@pytest.mark.parametrize("dim", [2, 3, 5, 8, 13, 21])
def test_eigenvalues_match_numpy(dim):
    rng = np.random.default_rng(100 + dim)
    for _ in range(5):
        h = random_hermitian(rng, dim)
        dec = eig_hermitian(validate_hermitian(h))
        np.testing.assert_allclose(
            dec.eigenvalues, np.linalg.eigvalsh(h), rtol=0, atol=1e-11 * dim
        )


def test_eigenbasis_reconstructs_matrix():
    rng = np.random.default_rng(42)
    for dim in (2, 4, 7, 12):
        h = random_hermitian(rng, dim)
        dec = eig_hermitian(validate_hermitian(h))
        rebuilt = (dec.basis * dec.eigenvalues) @ dec.basis.conj().T
        np.testing.assert_allclose(rebuilt, h, atol=1e-12 * dim)
        # unitary columns
        np.testing.assert_allclose(
            dec.basis.conj().T @ dec.basis, np.eye(dim), atol=1e-12 * dim
        )


def test_eigenvalues_ascending():
    rng = np.random.default_rng(3)
    for _ in range(20):
        dim = int(rng.integers(2, 16))
        dec = eig_hermitian(validate_hermitian(random_hermitian(rng, dim)))
        assert np.all(np.diff(dec.eigenvalues) >= 0.0)


def test_degenerate_spectrum():
    # two exact two-fold degeneracies, off-diagonal coupling rotated in
    rng = np.random.default_rng(9)
    d = np.diag([1.0, 1.0, 2.0, 2.0, 5.0]).astype(complex)
    g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    u = np.linalg.qr(g)[0]
    h = u @ d @ u.conj().T
    dec = eig_hermitian(validate_hermitian(h))
    np.testing.assert_allclose(
        dec.eigenvalues, [1.0, 1.0, 2.0, 2.0, 5.0], atol=1e-12
    )
    rebuilt = (dec.basis * dec.eigenvalues) @ dec.basis.conj().T
    np.testing.assert_allclose(rebuilt, h, atol=1e-12)


def test_already_diagonal_is_fixed_point():
    h = np.diag([3.0, -1.0, 0.5]).astype(complex)
    dec = eig_hermitian(validate_hermitian(h))
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 0.5, 3.0], atol=0)
    # basis must be a signed permutation (here: a permutation)
    np.testing.assert_allclose(np.abs(dec.basis), np.eye(3)[:, [1, 2, 0]], atol=0)


def test_validate_hermitian_rejects():
    with pytest.raises(NotSquareError):
        validate_hermitian(np.zeros((2, 3)))
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotHermitianError):
        validate_hermitian(bad)
    with pytest.raises((ValueError,)):
        validate_hermitian(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_validated_matrix_is_readonly():
    op = validate_hermitian(np.eye(3))
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2.0


def test_apply_spectral_function_exp():
    from scipy.linalg import expm

    rng = np.random.default_rng(17)
    h = random_hermitian(rng, 6)
    dec = eig_hermitian(validate_hermitian(h))
    np.testing.assert_allclose(
        apply_spectral_function(dec, np.exp), expm(h), atol=1e-10
    )


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(23)
    g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    m = g @ g.conj().T
    r = psd_sqrt(validate_hermitian(m))
    np.testing.assert_allclose(r @ r, m, atol=1e-10)


def test_singular_values_match_numpy():
    rng = np.random.default_rng(31)
    for shape in ((4, 4), (6, 6), (8, 8)):
        b = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        sv = singular_values_onesided(b)
        ref = np.linalg.svd(b, compute_uv=False)
        np.testing.assert_allclose(np.sort(sv)[::-1], ref, rtol=1e-10, atol=1e-12)


def test_singular_values_of_tiny_columns():
    # one-sided accuracy: small singular values keep relative precision
    b = np.diag([1.0, 1e-8, 1e-12]).astype(complex)
    sv = np.sort(singular_values_onesided(b))
    np.testing.assert_allclose(sv, [1e-12, 1e-8, 1.0], rtol=1e-12)
