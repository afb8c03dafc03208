"""Fidelity measures and susceptibility variants for Gibbs families.

All spectral sums run over matrix elements in the T-eigenbasis carried by
a :class:`~fidsus.gibbs.PerturbedFamily`.  Pair weights are evaluated
from the side of the lower energy level, so every exponential argument is
nonpositive and nothing overflows at any inverse temperature.  Pairs
closer than the degeneracy window get the analytic limit of their kernel,
taken in the symmetric form sqrt(p_m p_n) so Hermiticity survives exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    DegenerateGroundStateError,
    DimensionMismatchError,
    InternalFormMismatchError,
    NonFiniteError,
    NotDensityMatrixError,
    NotHermitianError,
    NotSquareError,
    QuadratureDisagreementError,
    StepTooSmallError,
)
from .gibbs import PerturbedFamily, correlation_G
from .kernels import expx_xm1_over_x2, tanh_over_x
from .linalg import (
    HermitianOperator,
    eig_hermitian,
    singular_values_onesided,
    validate_hermitian,
)

__all__ = [
    "FidelitySusceptibility",
    "TaylorRemainder",
    "ChiFGIntegral",
    "uhlmann_fidelity",
    "gf_fidelity",
    "bures_distance",
    "perturbed_density",
    "rho_prime",
    "chi_f_spectral",
    "chi_f_fd",
    "rho_taylor_check",
    "chi_f_ground_state",
    "chi_fg_spectral",
    "chi_fg_integral",
    "ds2_spectral",
]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class FidelitySusceptibility:
    """Fidelity susceptibility split into its diagonal and off-diagonal parts.

    ``total = classical + quantum`` holds by construction; both parts are
    sums of nonnegative terms.  ``degenerate_pair_count`` reports how many
    unordered level pairs fell inside the degeneracy window and were
    evaluated by the limit kernel.
    """

    total: float
    classical: float
    quantum: float
    degenerate_pair_count: int


@dataclass(frozen=True)
class TaylorRemainder:
    """Diagnostics of the order-by-order expansion of rho(h) around h = 0."""

    trace_rho_prime: float
    trace_rho_second: float
    r3_over_h3: float
    r3_over_h3_half: float


class ChiFGIntegral(NamedTuple):
    """Both evaluation routes of the imaginary-time integral."""

    closed_form: float
    quadrature: float


def _pair_grids(fam: PerturbedFamily, tols: Tolerances):
    """Symmetric pair quantities shared by every spectral sum.

    Returns the absolute gaps |T_m - T_n|, the scaled gaps beta|T_m - T_n|,
    log of the larger population of each pair, the geometric-mean log
    population, and the degeneracy mask (diagonal included).
    """
    ev = fam.eigenvalues
    lp = fam.log_populations
    gap = np.abs(ev[:, None] - ev[None, :])
    bgap = fam.beta * gap
    lp_low = np.maximum(lp[:, None], lp[None, :])
    lp_geo = 0.5 * (lp[:, None] + lp[None, :])
    deg = bgap < tols.degenerate_gap
    return gap, bgap, lp_low, lp_geo, deg


def _ratio_kernel(bgap, lp_low, lp_geo, deg):
    """Pair kernel (p_n - p_m)/X_mn, shared by chi_F and the BD product.

    Evaluated from the lower level as p_low (1 - e^{-2X})/X with
    X = beta|T_m - T_n|/2; inside the degeneracy window the limit
    2 sqrt(p_m p_n).
    """
    x = 0.5 * np.where(deg, 1.0, bgap)
    return np.where(
        deg,
        2.0 * np.exp(lp_geo),
        np.exp(lp_low) * (-np.expm1(-2.0 * x)) / x,
    )


def rho_prime(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Derivative of the Gibbs state at h = 0, in the T-eigenbasis.

    Off-diagonal elements are S_mn (p_n - p_m)/(T_m - T_n) with the
    difference quotient rewritten as beta p_low (-expm1(-beta|D|))/(beta|D|)
    so the subtraction never cancels; inside the degeneracy window the
    quotient goes to its limit in the symmetrized form beta sqrt(p_m p_n).
    Diagonal elements are beta p_m (S_mm - <S>).  The result is traceless
    up to rounding.
    """
    beta = fam.beta
    _, bgap, lp_low, lp_geo, deg = _pair_grids(fam, tols)
    safe = np.where(deg, 1.0, bgap)
    kern = np.where(
        deg,
        beta * np.exp(lp_geo),
        beta * np.exp(lp_low) * (-np.expm1(-safe)) / safe,
    )
    out = np.array(fam.s_eig * kern, dtype=complex)
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    np.fill_diagonal(out, beta * fam.populations * delta_d)
    return out


def chi_f_spectral(
    fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS
) -> FidelitySusceptibility:
    """Fidelity susceptibility from the spectral kernel sum.

    The quantum part is (beta^2/8) sum_{m != n} of
    [p_n (1 - e^{-2x})/x] [tanh(x)/x] |S_nm|^2 with x = beta(T_m - T_n)/2;
    the classical part is (beta^2/4) times the population variance of the
    diagonal of S.  The same quantity is recomputed from |rho'_mn|^2 /
    (2(p_m + p_n)) and the two routes must agree, which catches kernel
    regressions at the call site rather than in downstream bounds.

    Raises
    ------
    InternalFormMismatchError
        If the kernel and direct routes disagree beyond tolerance.
    """
    beta = fam.beta
    _, bgap, lp_low, lp_geo, deg = _pair_grids(fam, tols)
    x = 0.5 * bgap
    ratio1 = _ratio_kernel(bgap, lp_low, lp_geo, deg)
    pair = ratio1 * tanh_over_x(x) * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(pair, 0.0)
    quantum = 0.125 * beta * beta * float(pair.sum())

    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    classical = 0.25 * beta * beta * float(np.dot(fam.populations, delta_d**2))
    total = classical + quantum

    p = fam.populations
    num = np.abs(rho_prime(fam, tols)) ** 2
    den = 2.0 * (p[:, None] + p[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = float(np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0).sum())
    if abs(total - direct) > tols.chi_internal_rel * max(1.0, abs(total)):
        raise InternalFormMismatchError(
            f"kernel form {total!r} and direct form {direct!r} disagree "
            f"beyond {tols.chi_internal_rel:g} relative"
        )

    n_deg = (int(np.count_nonzero(deg)) - fam.dim) // 2
    return FidelitySusceptibility(
        total=total,
        classical=classical,
        quantum=quantum,
        degenerate_pair_count=n_deg,
    )


def ds2_spectral(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Leading coefficient of the squared Bures distance, d_B^2 / h^2.

    Evaluated as (beta^2/4) Var(S^d) plus the unordered pair sum of
    p_low (1 - e^{-2X})^2 / ((1 + e^{-2X}) (T_m - T_n)^2) |S_mn|^2.  Term
    by term this equals the fidelity susceptibility; computing it through
    this second composition keeps the equality test meaningful.
    """
    beta = fam.beta
    gap, bgap, lp_low, lp_geo, deg = _pair_grids(fam, tols)
    q = -np.expm1(-bgap)
    safe_gap = np.where(deg, 1.0, gap)
    w = np.where(
        deg,
        0.5 * beta * beta * np.exp(lp_geo),
        np.exp(lp_low) * q * q / (safe_gap * safe_gap * (2.0 - q)),
    )
    pair = w * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(pair, 0.0)
    off = 0.5 * float(pair.sum())
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    return 0.25 * beta * beta * float(np.dot(fam.populations, delta_d**2)) + off


def chi_fg_spectral(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Green's-function susceptibility from its spectral sum.

    (beta^2/8) Var(S^d) plus the unordered pair sum of
    (sqrt(p_m) - sqrt(p_n))^2 / (T_m - T_n)^2 |S_mn|^2, the square root
    difference rewritten as p_low expm1(-X)^2 so it never cancels.
    """
    beta = fam.beta
    gap, bgap, lp_low, lp_geo, deg = _pair_grids(fam, tols)
    e = np.expm1(-0.5 * bgap)
    safe_gap = np.where(deg, 1.0, gap)
    w = np.where(
        deg,
        0.25 * beta * beta * np.exp(lp_geo),
        np.exp(lp_low) * e * e / (safe_gap * safe_gap),
    )
    pair = w * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(pair, 0.0)
    off = 0.5 * float(pair.sum())
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    return 0.125 * beta * beta * float(np.dot(fam.populations, delta_d**2)) + off


def chi_fg_integral(
    fam: PerturbedFamily,
    quad_nodes: int = 64,
    tols: Tolerances = DEFAULT_TOLS,
) -> ChiFGIntegral:
    """Green's-function susceptibility as int_0^{beta/2} tau G(tau) dtau.

    Two independent routes are evaluated and both returned: the per-term
    closed form of the integral (primary), and Gauss-Legendre quadrature
    of tau G(tau).  Each off-diagonal closed-form term is
    p_m |S_mn|^2 b^2 g(ab) with a = T_m - T_n, b = beta/2 and
    g(x) = (e^x (x - 1) + 1)/x^2; for ab >= 0.5 the product p_m e^{ab} is
    taken in log space, where the combined exponent is always nonpositive.

    Raises
    ------
    QuadratureDisagreementError
        If the two routes disagree beyond tolerance.
    ValueError
        If ``quad_nodes`` is below 16.
    """
    quad_nodes = int(quad_nodes)
    if quad_nodes < 16:
        raise ValueError(f"need at least 16 quadrature nodes, got {quad_nodes}")
    beta = fam.beta
    b = 0.5 * beta
    ev = fam.eigenvalues
    lp = fam.log_populations

    a = ev[:, None] - ev[None, :]
    ab = b * a
    small = np.abs(ab) < 0.5
    lp_m = np.broadcast_to(lp[:, None], ab.shape)
    p_m = np.exp(lp_m)
    g_small = expx_xm1_over_x2(np.where(small, ab, 0.0))
    safe_a = np.where(small, 1.0, a)
    large = (np.exp(lp_m + ab) * (ab - 1.0) + p_m) / (safe_a * safe_a)
    terms = np.where(small, p_m * (b * b) * g_small, large) * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(terms, 0.0)
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    var_d = float(np.dot(fam.populations, delta_d**2))
    closed = 0.125 * beta * beta * var_d + float(terms.sum())

    nodes, weights = np.polynomial.legendre.leggauss(quad_nodes)
    taus = 0.5 * b * (nodes + 1.0)
    quad = 0.5 * b * float(
        np.sum(weights * np.array([t * correlation_G(fam, t) for t in taus]))
    )

    if abs(closed - quad) > tols.quadrature_agreement_rel * max(1.0, abs(closed)):
        raise QuadratureDisagreementError(
            f"closed form {closed!r} vs {quad_nodes}-node quadrature {quad!r}"
        )
    return ChiFGIntegral(closed_form=closed, quadrature=quad)


def chi_f_ground_state(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Zero-temperature limit: sum over |S_n0|^2 / (T_n - T_0)^2."""
    ev = fam.eigenvalues
    if fam.dim == 1:
        return 0.0
    gap = float(ev[1] - ev[0])
    if gap <= tols.ground_state_gap:
        raise DegenerateGroundStateError(
            f"ground-state gap {gap:.3e} is inside the tolerance "
            f"{tols.ground_state_gap:g}"
        )
    col = fam.s_eig[1:, 0]
    return float(np.sum(np.abs(col) ** 2 / (ev[1:] - ev[0]) ** 2))


def _perturbed_spectrum(fam: PerturbedFamily, h: float, tols: Tolerances):
    """Spectrum and log populations of H(h) = T - h S at the family's beta."""
    a = np.diag(fam.eigenvalues).astype(complex) - h * fam.s_eig
    d = eig_hermitian(validate_hermitian(a, tols), tols)
    shifted = -fam.beta * (d.eigenvalues - d.eigenvalues[0])
    return d, shifted - np.logaddexp.reduce(shifted)


def perturbed_density(
    fam: PerturbedFamily, h: float, tols: Tolerances = DEFAULT_TOLS
) -> np.ndarray:
    """Density matrix of H(h) = T - h S at the family's beta, in the T-eigenbasis.

    Used by the finite-difference oracles.  Diagonalizes the perturbed
    Hamiltonian in full, so the cost is one eigendecomposition per call.
    """
    d, lp = _perturbed_spectrum(fam, float(h), tols)
    rho = (d.basis * np.exp(lp)) @ d.basis.conj().T
    return 0.5 * (rho + rho.conj().T)


def _tr_sqrt_psd(m: np.ndarray, tols: Tolerances) -> float:
    d = eig_hermitian(validate_hermitian(m, tols), tols)
    lam = d.eigenvalues
    if float(lam[0]) < -tols.psd_clip * max(1.0, float(np.abs(lam).max())):
        raise NotDensityMatrixError(
            f"product matrix has eigenvalue {lam[0]!r} below the PSD clip"
        )
    return float(np.sqrt(np.clip(lam, 0.0, None)).sum())


def _density_spectrum(rho, tols: Tolerances):
    try:
        op = (
            rho
            if isinstance(rho, HermitianOperator)
            else validate_hermitian(np.asarray(rho, dtype=complex), tols)
        )
    except (NotSquareError, NotHermitianError, NonFiniteError) as exc:
        raise NotDensityMatrixError(str(exc)) from exc
    d = eig_hermitian(op, tols)
    tr = float(d.eigenvalues.sum())
    if abs(tr - 1.0) > tols.density_trace:
        raise NotDensityMatrixError(f"trace is {tr!r}, not 1 within {tols.density_trace:g}")
    if float(d.eigenvalues[0]) < -tols.psd_clip:
        raise NotDensityMatrixError(
            f"eigenvalue {float(d.eigenvalues[0])!r} below -{tols.psd_clip:g}"
        )
    return d


def _psd_power(d, exponent: float) -> np.ndarray:
    lam = np.clip(d.eigenvalues, 0.0, None) ** exponent
    m = (d.basis * lam) @ d.basis.conj().T
    return 0.5 * (m + m.conj().T)


def uhlmann_fidelity(rho1, rho2, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)).

    Parameters
    ----------
    rho1, rho2 : array_like or HermitianOperator
        Density matrices: Hermitian, unit trace, positive semidefinite
        within the clip tolerance.

    Returns
    -------
    float
        Fidelity in [0, 1] up to rounding; 1 iff the states coincide.

    Raises
    ------
    NotDensityMatrixError
        If either input fails the density-matrix checks.
    """
    d1 = _density_spectrum(rho1, tols)
    d2 = _density_spectrum(rho2, tols)
    if d1.dim != d2.dim:
        raise DimensionMismatchError(f"dimensions {d1.dim} and {d2.dim} differ")
    s1 = _psd_power(d1, 0.5)
    m = s1 @ _psd_power(d2, 1.0) @ s1
    return _tr_sqrt_psd(0.5 * (m + m.conj().T), tols)


def gf_fidelity(rho1, rho2, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Green's-function fidelity Tr sqrt(rho1^{1/2} rho2^{1/2}).

    Evaluated through the Hermitian similarity
    Tr sqrt(rho1^{1/4} rho2^{1/2} rho1^{1/4}).  Note this is not
    normalized to 1 on identical mixed states: for rho1 = rho2 = I/2 it
    returns sqrt(2).
    """
    d1 = _density_spectrum(rho1, tols)
    d2 = _density_spectrum(rho2, tols)
    if d1.dim != d2.dim:
        raise DimensionMismatchError(f"dimensions {d1.dim} and {d2.dim} differ")
    q1 = _psd_power(d1, 0.25)
    m = q1 @ _psd_power(d2, 0.5) @ q1
    return _tr_sqrt_psd(0.5 * (m + m.conj().T), tols)


def bures_distance(rho1, rho2, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Bures distance sqrt(2 - 2 F(rho1, rho2))."""
    f = uhlmann_fidelity(rho1, rho2, tols)
    return math.sqrt(max(0.0, 2.0 - 2.0 * f))


def chi_f_fd(fam: PerturbedFamily, h: float, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Finite-difference susceptibility, the oracle for chi_f_spectral.

    Builds rho(+-h) and rho(+-h/2) by full exponentiation, forms the
    symmetric quotient chi(step) = (2 - F_+ - F_-)/step^2 and Richardson
    extrapolates: (4 chi(h/2) - chi(h))/3, which cancels the step^2 error
    and every odd order.  Each fidelity is taken as the nuclear norm of
    sqrt(rho(0)) sqrt(rho(step)) with the factor assembled entrywise in
    log space, so the tiny singular values that feed 1 - F keep relative
    accuracy; an eigendecomposition of the formed product would bury them
    in noise amplified by 1/step^2.

    Raises
    ------
    StepTooSmallError
        When 1 - F drops below 100 machine epsilon and the quotient would
        be pure cancellation noise.
    ValueError
        If ``h`` is outside (0, 0.1].
    """
    h = float(h)
    if not 0.0 < h <= 0.1:
        raise ValueError(f"step must lie in (0, 0.1], got {h!r}")
    lp0 = fam.log_populations
    floor = 100.0 * _EPS

    def quotient(step: float) -> float:
        defect = 0.0
        for sign in (1.0, -1.0):
            d, lph = _perturbed_spectrum(fam, sign * step, tols)
            factor = np.exp(0.5 * (lp0[:, None] + lph[None, :])) * d.basis
            loss = 1.0 - float(singular_values_onesided(factor).sum())
            if loss < floor:
                raise StepTooSmallError(
                    f"1 - F = {loss:.3e} at step {sign * step:g} is below "
                    f"the cancellation floor {floor:.3e}"
                )
            defect += loss
        return defect / (step * step)

    return (4.0 * quotient(0.5 * h) - quotient(h)) / 3.0


def rho_taylor_check(
    fam: PerturbedFamily, h: float, tols: Tolerances = DEFAULT_TOLS
) -> TaylorRemainder:
    """Probe the Taylor structure of rho(h) by finite differences.

    Checks that first and second finite-difference derivatives are
    traceless to their respective noise floors, and that the third-order
    remainder against the spectral rho'(0) scales as h^3 (the reported
    ratios at h and h/2 should agree to a factor of order one).
    """
    h = float(h)
    if not 0.0 < h <= 0.1:
        raise ValueError(f"step must lie in (0, 0.1], got {h!r}")
    rho0 = np.diag(fam.populations).astype(complex)
    rp = rho_prime(fam, tols)

    cache: dict[float, np.ndarray] = {}

    def rho_at(step: float) -> np.ndarray:
        if step not in cache:
            cache[step] = perturbed_density(fam, step, tols)
        return cache[step]

    tr1 = abs(complex(np.trace(rho_at(h) - rho_at(-h)))) / (2.0 * h)
    second = (rho_at(h) - 2.0 * rho0 + rho_at(-h)) / (h * h)
    tr2 = abs(complex(np.trace(second)))

    href = h / 8.0
    second_ref = (rho_at(href) - 2.0 * rho0 + rho_at(-href)) / (href * href)

    def ratio(step: float) -> float:
        rem = rho_at(step) - rho0 - step * rp - 0.5 * step * step * second_ref
        return float(np.linalg.norm(rem)) / step**3

    return TaylorRemainder(
        trace_rho_prime=tr1,
        trace_rho_second=tr2,
        r3_over_h3=ratio(h),
        r3_over_h3_half=ratio(0.5 * h),
    )
