"""Gibbs ensembles and perturbed one-parameter families.

Everything downstream of this module works in the eigenbasis of the
unperturbed Hamiltonian T: populations, perturbation matrix elements and
imaginary-time correlations all derive from a single spectral
decomposition.  Populations are kept in log space so that large inverse
temperatures never overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    DimensionMismatchError,
    NonPositiveBetaError,
    NotHermitianError,
    TauOutOfRangeError,
)
from .linalg import (
    HermitianOperator,
    SpectralDecomposition,
    eig_hermitian,
    validate_hermitian,
)

__all__ = [
    "GibbsEnsemble",
    "PerturbedFamily",
    "build_gibbs",
    "build_gibbs_from_spectrum",
    "attach_perturbation",
    "make_family",
    "family_at_beta",
    "thermal_average",
    "correlation_G",
]


@dataclass(frozen=True, eq=False)
class GibbsEnsemble:
    """Thermal state e^{-beta T}/Z held in diagonal (eigenbasis) form.

    Attributes
    ----------
    beta : float
        Inverse temperature, strictly positive.
    spectrum : SpectralDecomposition
        Decomposition of T; eigenvalues ascending.
    populations : ndarray
        Boltzmann weights p_n, nonnegative and summing to one.  Individual
        entries may underflow to exact zero at extreme beta; see
        ``underflow_count``.
    log_populations : ndarray
        log p_n, always finite.  All kernel evaluations use these.
    log_z : float
        log of the partition function.
    underflow_count : int
        Number of populations that flushed to zero in ``populations``.
    """

    beta: float
    spectrum: SpectralDecomposition
    populations: np.ndarray = field(repr=False)
    log_populations: np.ndarray = field(repr=False)
    log_z: float
    underflow_count: int = 0

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues


@dataclass(frozen=True, eq=False)
class PerturbedFamily:
    """A Gibbs family H(h) = T - h S frozen at the h = 0 point.

    The perturbation is stored only in the T-eigenbasis (``s_eig``); the
    original basis is discarded after construction because every spectral
    formula downstream is written in eigenbasis matrix elements.
    ``particle_count`` is metadata from the model builder used for
    per-particle quantities; it is never inferred from the dimension.
    """

    ensemble: GibbsEnsemble
    s_eig: np.ndarray = field(repr=False)
    s_mean: float
    particle_count: int = 1

    @property
    def beta(self) -> float:
        return self.ensemble.beta

    @property
    def dim(self) -> int:
        return self.ensemble.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.ensemble.eigenvalues

    @property
    def populations(self) -> np.ndarray:
        return self.ensemble.populations

    @property
    def log_populations(self) -> np.ndarray:
        return self.ensemble.log_populations


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise NonPositiveBetaError(f"beta must be positive and finite, got {beta!r}")
    return beta


def build_gibbs_from_spectrum(
    spectrum: SpectralDecomposition, beta: float
) -> GibbsEnsemble:
    """Build the ensemble from an existing decomposition of T.

    This is the cheap path for temperature sweeps: one diagonalization,
    many ensembles.
    """
    beta = _check_beta(beta)
    ev = spectrum.eigenvalues
    shifted = -beta * (ev - ev[0])
    lse = float(np.logaddexp.reduce(shifted))
    lp = shifted - lse
    lp.setflags(write=False)
    p = np.exp(lp)
    p.setflags(write=False)
    underflow = int(np.count_nonzero(p == 0.0))
    log_z = lse - beta * float(ev[0])
    return GibbsEnsemble(
        beta=beta,
        spectrum=spectrum,
        populations=p,
        log_populations=lp,
        log_z=log_z,
        underflow_count=underflow,
    )


def build_gibbs(
    T: HermitianOperator | np.ndarray,
    beta: float,
    tols: Tolerances = DEFAULT_TOLS,
) -> GibbsEnsemble:
    """Diagonalize T and build the Gibbs ensemble at inverse temperature beta."""
    if not isinstance(T, HermitianOperator):
        T = validate_hermitian(T, tols)
    return build_gibbs_from_spectrum(eig_hermitian(T, tols), beta)


def attach_perturbation(
    ens: GibbsEnsemble,
    S: HermitianOperator | np.ndarray,
    particle_count: int = 1,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """Rotate the perturbation into the T-eigenbasis and record its mean.

    Parameters
    ----------
    ens : GibbsEnsemble
        The unperturbed thermal state.
    S : HermitianOperator or array
        Perturbation in the original basis.
    particle_count : int
        Number of particles the model builder says S sums over.

    Returns
    -------
    PerturbedFamily
    """
    if not isinstance(S, HermitianOperator):
        S = validate_hermitian(S, tols)
    if S.dim != ens.dim:
        raise DimensionMismatchError(
            f"perturbation is {S.dim}x{S.dim} but T is {ens.dim}x{ens.dim}"
        )
    if particle_count < 1:
        raise ValueError(f"particle_count must be >= 1, got {particle_count}")
    b = ens.spectrum.basis
    s_eig = b.conj().T @ S.matrix @ b
    # the rotation is unitary up to tols.basis_unitarity, so Hermiticity
    # survives to the same order; re-symmetrize to make it exact
    asym = float(np.max(np.abs(s_eig - s_eig.conj().T)))
    scale = max(1.0, float(np.linalg.norm(s_eig)))
    if asym > 1e-10 * scale:
        raise NotHermitianError(
            f"perturbation lost Hermiticity in the basis rotation: defect {asym:.3e}"
        )
    s_eig = 0.5 * (s_eig + s_eig.conj().T)
    s_eig.setflags(write=False)
    s_mean = float(np.dot(ens.populations, np.real(np.diagonal(s_eig))))
    return PerturbedFamily(
        ensemble=ens, s_eig=s_eig, s_mean=s_mean, particle_count=particle_count
    )


def make_family(
    T: HermitianOperator | np.ndarray,
    S: HermitianOperator | np.ndarray,
    beta: float,
    particle_count: int = 1,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """One-step constructor: diagonalize T, thermalize, attach S."""
    return attach_perturbation(build_gibbs(T, beta, tols), S, particle_count, tols)


def family_at_beta(fam: PerturbedFamily, beta: float) -> PerturbedFamily:
    """Rebuild the family at a different temperature without re-diagonalizing.

    The eigenbasis and S_eig are temperature independent; only populations
    and the perturbation mean change.
    """
    ens = build_gibbs_from_spectrum(fam.ensemble.spectrum, beta)
    s_mean = float(np.dot(ens.populations, np.real(np.diagonal(fam.s_eig))))
    return PerturbedFamily(
        ensemble=ens,
        s_eig=fam.s_eig,
        s_mean=s_mean,
        particle_count=fam.particle_count,
    )


def thermal_average(fam: PerturbedFamily, A: np.ndarray) -> float:
    """Average Tr(rho A) for A given in the T-eigenbasis.

    Returns the real part; an imaginary residue above 1e-12 (which a
    Hermitian A cannot produce beyond rounding) is reported as a warning.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] != fam.dim:
        raise DimensionMismatchError(
            f"operator is {A.shape[0]}x{A.shape[0]} but the family has dim {fam.dim}"
        )
    asym = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if asym > 1e-10 * max(1.0, float(np.linalg.norm(A))):
        raise NotHermitianError(f"operator is not Hermitian: defect {asym:.3e}")
    diag = np.diagonal(A)
    value = float(np.dot(fam.populations, np.real(diag)))
    residue = abs(float(np.dot(fam.populations, np.imag(diag))))
    if residue > 1e-12:
        warnings.warn(
            f"thermal average has imaginary residue {residue:.3e}", stacklevel=2
        )
    return value


def correlation_G(fam: PerturbedFamily, tau: float) -> float:
    """Imaginary-time autocorrelation G(tau) of the perturbation.

    G(tau) = sum_{m,n} p_m e^{tau (T_m - T_n)} |S_mn|^2 - <S>^2 for
    0 <= tau <= beta.  The exponent is evaluated as the convex combination
    (1 - tau/beta) log p_m + (tau/beta) log p_n, which is bounded above by
    zero, so the sum never overflows however large beta is.  The diagonal
    part is accumulated in the mean-subtracted form so the tau-independent
    variance comes out without cancellation.
    """
    tau = float(tau)
    beta = fam.beta
    if not math.isfinite(tau) or tau < 0.0 or tau > beta:
        raise TauOutOfRangeError(f"tau must lie in [0, beta={beta!r}], got {tau!r}")
    lam = tau / beta
    lp = fam.log_populations
    weights = np.exp((1.0 - lam) * lp[:, None] + lam * lp[None, :])
    s_abs2 = np.abs(fam.s_eig) ** 2
    np.fill_diagonal(weights, 0.0)
    off = float(np.sum(weights * s_abs2))
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    diag = float(np.dot(fam.populations, delta_d**2))
    return off + diag
