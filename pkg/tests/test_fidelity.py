"""Susceptibility formulas against finite-difference and matrix oracles."""

import numpy as np
import pytest
from scipy.linalg import sqrtm

from conftest import random_hermitian, seeded_families
from fidsus.config import Tolerances
from fidsus.errors import (
    DegenerateGroundStateError,
    InternalFormMismatchError,
    NotDensityMatrixError,
)
from fidsus.fidelity import (
    bures_distance,
    chi_f_fd,
    chi_f_ground_state,
    chi_f_spectral,
    chi_fg_integral,
    chi_fg_spectral,
    ds2_spectral,
    gf_fidelity,
    perturbed_density,
    rho_prime,
    rho_taylor_check,
    uhlmann_fidelity,
)
from fidsus.gibbs import family_at_beta, make_family
from fidsus.models import random_pair, single_spin


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


# ---------------------------------------------------------------------------
# fidelity functionals


def test_uhlmann_against_sqrtm():
    rng = np.random.default_rng(51)
    for dim in (2, 3, 5, 7):
        a = random_density(rng, dim)
        b = random_density(rng, dim)
        ra = sqrtm(a)
        ref = np.real(np.trace(sqrtm(ra @ b @ ra)))
        assert uhlmann_fidelity(a, b) == pytest.approx(ref, abs=1e-10)


def test_uhlmann_basic_properties():
    rng = np.random.default_rng(52)
    a = random_density(rng, 4)
    b = random_density(rng, 4)
    assert uhlmann_fidelity(a, a) == pytest.approx(1.0, abs=1e-12)
    assert uhlmann_fidelity(a, b) == pytest.approx(uhlmann_fidelity(b, a), abs=1e-12)
    assert 0.0 < uhlmann_fidelity(a, b) < 1.0


def test_uhlmann_rejects_non_density():
    with pytest.raises(NotDensityMatrixError):
        uhlmann_fidelity(np.eye(2), np.eye(2) / 2.0)  # trace 2
    with pytest.raises(NotDensityMatrixError):
        uhlmann_fidelity(np.diag([1.5, -0.5]), np.eye(2) / 2.0)


def test_bures_distance_relation():
    rng = np.random.default_rng(53)
    a = random_density(rng, 3)
    b = random_density(rng, 3)
    f = uhlmann_fidelity(a, b)
    assert bures_distance(a, b) == pytest.approx(np.sqrt(2.0 - 2.0 * f), abs=1e-14)
    assert bures_distance(a, a) == pytest.approx(0.0, abs=1e-7)


def test_gf_fidelity_properties():
    rng = np.random.default_rng(54)
    a = random_density(rng, 4)
    b = random_density(rng, 4)
    # symmetric, and on identical states equals Tr sqrt(rho)
    assert gf_fidelity(a, b) == pytest.approx(gf_fidelity(b, a), abs=1e-11)
    assert gf_fidelity(a, a) == pytest.approx(
        np.real(np.trace(sqrtm(a))), abs=1e-10
    )
    pure = np.zeros((3, 3), dtype=complex)
    pure[0, 0] = 1.0
    assert gf_fidelity(pure, pure) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# the susceptibility and its decomposition


def test_chi_f_vs_finite_difference():
    for fam in seeded_families(2001, 25, 2, 8, 0.2, 5.0):
        chi = chi_f_spectral(fam).total
        fd = chi_f_fd(fam, 1e-3)
        assert abs(chi - fd) <= 1e-6 * max(1.0, chi)


def test_split_adds_up_exactly():
    for fam in seeded_families(2002, 40, 2, 12, 0.1, 10.0):
        parts = chi_f_spectral(fam)
        assert parts.total == parts.classical + parts.quantum
        assert parts.classical >= 0.0
        assert parts.quantum >= 0.0


def test_quantum_part_vanishes_when_commuting():
    rng = np.random.default_rng(55)
    d = np.diag(rng.normal(size=5))
    s = np.diag(rng.normal(size=5))
    fam = make_family(d, s, 1.3)
    parts = chi_f_spectral(fam)
    assert parts.quantum == pytest.approx(0.0, abs=1e-18)
    p = fam.populations
    sd = np.real(np.diagonal(fam.s_eig))
    var = float(np.dot(p, (sd - np.dot(p, sd)) ** 2))
    assert parts.total == pytest.approx(0.25 * 1.3**2 * var, rel=1e-14)


def test_ds2_equals_chi_f():
    for fam in seeded_families(2003, 40, 2, 12, 0.1, 10.0):
        chi = chi_f_spectral(fam).total
        assert abs(ds2_spectral(fam) - chi) <= 1e-12 * max(1.0, chi)


def test_ds2_matches_bures_curvature():
    fam = random_pair(5, 77, 1.0, 1.0, 1.2)
    rho0 = np.diag(fam.populations).astype(complex)
    h = 1e-3
    db2 = bures_distance(rho0, perturbed_density(fam, h)) ** 2
    assert db2 / h**2 == pytest.approx(ds2_spectral(fam), rel=2e-3)


def test_internal_form_guard_fires_when_tightened():
    # the two internal forms differ by an ulp or so on most families; with the
    # tolerance cranked below machine precision the guard must trip somewhere,
    # while the default tolerance never does
    tight = Tolerances(chi_internal_rel=1e-18)
    fired = 0
    for seed in (3, 7, 55, 91):
        for dim in (6, 10, 12):
            fam = random_pair(dim, seed, 1.0, 1.0, 2.0)
            chi_f_spectral(fam)
            try:
                chi_f_spectral(fam, tight)
            except InternalFormMismatchError as err:
                assert err.check == "chi_f_forms"
                fired += 1
    assert fired >= 3


def test_degenerate_limit_continuous():
    flat = chi_f_spectral(single_spin(0.0))
    assert flat.total == pytest.approx(0.25, abs=1e-15)
    assert flat.degenerate_pair_count == 1
    near = chi_f_spectral(single_spin(1e-9)).total
    assert near == pytest.approx(0.25, abs=1e-9)


def test_chi_f_fd_step_validation():
    fam = random_pair(3, 1, 1.0, 1.0, 1.0)
    for h in (0.0, -1e-3, 0.2):
        with pytest.raises(ValueError):
            chi_f_fd(fam, h)


# ---------------------------------------------------------------------------
# Green's-function variant


def test_chi_fg_spectral_vs_integral():
    for fam in seeded_families(2004, 30, 2, 10, 0.1, 8.0):
        fg = chi_fg_spectral(fam)
        both = chi_fg_integral(fam)
        assert abs(fg - both.closed_form) <= 1e-8 * max(1.0, fg)
        assert abs(both.closed_form - both.quadrature) <= 1e-9 * max(1.0, fg)


def test_chi_fg_between_half_and_full_ds2():
    for fam in seeded_families(2005, 40, 2, 12, 0.1, 10.0):
        fg = chi_fg_spectral(fam)
        d2 = ds2_spectral(fam)
        assert 0.5 * d2 - 1e-12 <= fg <= d2 + 1e-12
        assert fg <= chi_f_spectral(fam).total + 1e-12


# ---------------------------------------------------------------------------
# density derivative and expansion structure


def test_rho_prime_traceless_hermitian():
    for fam in seeded_families(2006, 20, 2, 9, 0.2, 6.0):
        rp = rho_prime(fam)
        assert abs(complex(np.trace(rp))) <= 1e-12
        np.testing.assert_allclose(rp, rp.conj().T, atol=1e-14)


def test_rho_prime_vs_central_difference():
    fam = random_pair(5, 33, 1.0, 1.0, 1.5)
    h = 1e-4
    fd = (perturbed_density(fam, h) - perturbed_density(fam, -h)) / (2.0 * h)
    np.testing.assert_allclose(rho_prime(fam), fd, atol=5e-8)


def test_perturbed_density_is_density():
    fam = random_pair(6, 44, 1.0, 1.0, 2.0)
    for h in (-0.05, 0.01, 0.08):
        rho = perturbed_density(fam, h)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        ev = np.linalg.eigvalsh(rho)
        assert ev.min() >= -1e-13


def test_taylor_remainder_ratios():
    fam = random_pair(4, 7, 1.0, 1.0, 1.0)
    rem = rho_taylor_check(fam, 1e-2)
    assert rem.trace_rho_prime <= 1e-10
    assert rem.trace_rho_second <= 1e-8
    # third-order coefficient stable under halving the step
    assert rem.r3_over_h3 == pytest.approx(rem.r3_over_h3_half, rel=0.2)


# ---------------------------------------------------------------------------
# ground-state limit


def test_ground_state_limit_of_thermal_chi():
    fam = random_pair(5, 66, 1.0, 1.0, 1.0)
    gs = chi_f_ground_state(fam)
    for beta in (1e2, 1e4):
        cold = family_at_beta(fam, beta)
        assert chi_f_spectral(cold).total == pytest.approx(gs, rel=1e-10)


def test_ground_state_requires_gap():
    t = np.diag([0.0, 0.0, 1.0]).astype(complex)
    fam = make_family(t, np.eye(3), 1.0)
    with pytest.raises(DegenerateGroundStateError):
        chi_f_ground_state(fam)
