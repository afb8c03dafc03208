"""Thermodynamic bounds sandwiching the fidelity susceptibility.

The Bogoliubov-Duhamel inner product (dS; dS) of the zero-mean
perturbation controls chi_F from both sides: (beta^2/4)(dS; dS) is an
upper bound, and subtracting (beta^3/48) <[[S, T], S]> gives a lower
bound.  Both are static thermal expectations, so they are cheap to
evaluate along a sweep and they tie chi_F to the ordinary thermodynamic
susceptibility beta (dS; dS)/N.

Every quantity here is computed in the eigenbasis of the unperturbed
Hamiltonian from populations kept in log space, mirroring the kernel
strategy of the fidelity module; see `bd_inner_product` for the shared
pair kernel.  Each nontrivial sum has an independent cross-check (an
integral quadrature for the inner product, a commutator expectation for
the curvature term, a free-energy finite difference for chi_N) and the
checks raise rather than warn, because a silently wrong bound would
invalidate every sandwich test downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import CrossCheckError
from .fidelity import (
    _pair_grids,
    _perturbed_spectrum,
    _ratio_kernel,
    chi_f_spectral,
    chi_fg_spectral,
    ds2_spectral,
)
from .gibbs import PerturbedFamily, correlation_G, thermal_average
from .kernels import tanh_over_x

__all__ = [
    "BoundReport",
    "PerParticleBounds",
    "bd_inner_product",
    "bd_integral_oracle",
    "bound_report",
    "double_commutator",
    "double_commutator_direct",
    "free_energy_curvature",
    "kernel_xcothx_inv",
    "lower_bound",
    "thermo_susceptibility",
    "upper_bound",
]


def kernel_xcothx_inv(x):
    """Kernel tanh(x)/x = 1/(x coth x), the quantum suppression factor.

    This is the factor by which a pair's contribution to chi_F falls
    short of its contribution to the upper bound.  It equals 1 at x = 0
    and decays like 1/|x|, which is the whole content of the sandwich:
    classical pairs saturate, far-separated pairs are suppressed.
    Delegates to the guarded series/direct evaluation shared with the
    fidelity kernels; accepts scalars or arrays.
    """
    return tanh_over_x(x)


def bd_inner_product(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Bogoliubov-Duhamel inner product (dS; dS) of the perturbation.

    Spectral form: (1/2) sum over ordered pairs m != n of
    (p_n - p_m)/X_mn |S_nm|^2 plus the population variance of the
    diagonal of S, with X_mn = beta(T_m - T_n)/2.  The pair ratio is the
    same kernel that appears inside chi_F, so both bounds and the
    susceptibility are built from one audited code path.
    """
    _, bgap, lp_low, lp_geo, deg = _pair_grids(fam, tols)
    pair = _ratio_kernel(bgap, lp_low, lp_geo, deg) * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(pair, 0.0)
    delta_d = np.real(np.diagonal(fam.s_eig)) - fam.s_mean
    diag = float(np.dot(fam.populations, delta_d**2))
    return 0.5 * float(pair.sum()) + diag


def bd_integral_oracle(
    fam: PerturbedFamily, nodes: int = 64, tols: Tolerances = DEFAULT_TOLS
) -> float:
    """(dS; dS) from its defining imaginary-time integral.

    Gauss-Legendre quadrature of the two-point function G over
    lambda in [0, 1], i.e. the average of <dS(lambda beta) dS> along the
    thermal circle.  G is an entire function of lambda on a compact
    interval, so the quadrature converges geometrically and 64 nodes are
    far past machine precision for any bounded spectrum.  This is the
    independent route used to audit `bd_inner_product`; it shares no
    kernel code with it.
    """
    if nodes < 16:
        raise ValueError(f"need at least 16 quadrature nodes, got {nodes}")
    x, w = np.polynomial.legendre.leggauss(int(nodes))
    lam = 0.5 * (x + 1.0)
    values = [correlation_G(fam, float(t * fam.beta)) for t in lam]
    return 0.5 * float(np.dot(w, values))


def double_commutator(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Thermal expectation <[[S, T], S]>, the lower-bound curvature term.

    Computed two ways and returned only after they agree:

    * spectral: sum over pairs of (p_n - p_m)(T_m - T_n) |S_nm|^2,
      evaluated as p_low (1 - e^{-beta|gap|}) |gap| |S|^2 so every factor
      is bounded and nonnegative; the degenerate limit is 0 and is
      reached smoothly, so no window switch is needed here;
    * direct: the thermal average of K S - S K with K = [S, T], formed
      elementwise in the eigenbasis where K_mn = S_mn (T_n - T_m).

    The spectral value is returned.  Both routes must be nonnegative up
    to rounding; a genuinely negative value would mean the lower bound
    crosses above the upper bound.

    Raises
    ------
    CrossCheckError
        check "dcomm_forms" if the routes disagree beyond
        ``tols.dcomm_agreement_rel``, check "dcomm_negative" if either
        route is negative beyond rounding.
    """
    gap, bgap, lp_low, _, _ = _pair_grids(fam, tols)
    term = np.exp(lp_low) * (-np.expm1(-bgap)) * gap * np.abs(fam.s_eig) ** 2
    np.fill_diagonal(term, 0.0)
    spectral = float(term.sum())

    direct = double_commutator_direct(fam)
    if spectral < -1e-12 or direct < -1e-12:
        raise CrossCheckError(
            "dcomm_negative",
            f"double commutator negative: spectral {spectral!r}, direct {direct!r}",
        )
    if abs(spectral - direct) > tols.dcomm_agreement_rel * max(1.0, abs(spectral)):
        raise CrossCheckError(
            "dcomm_forms",
            f"spectral form {spectral!r} and commutator form {direct!r} disagree "
            f"beyond {tols.dcomm_agreement_rel:g} relative",
        )
    return spectral


def double_commutator_direct(fam: PerturbedFamily) -> float:
    """<[[S, T], S]> as an explicit commutator expectation.

    Exposed separately so callers probing truncated models (where the
    spectral sum and the commutator route can legitimately differ at the
    cutoff boundary) can evaluate this route on its own.
    """
    ev = fam.eigenvalues
    k = fam.s_eig * (ev[None, :] - ev[:, None])
    return thermal_average(fam, k @ fam.s_eig - fam.s_eig @ k)


def upper_bound(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Upper bound (beta^2/4)(dS; dS) on the fidelity susceptibility."""
    beta = fam.beta
    return 0.25 * beta * beta * bd_inner_product(fam, tols)


def lower_bound(fam: PerturbedFamily, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Lower bound: the upper bound minus (beta^3/48) <[[S, T], S]>.

    Returned as computed, without clipping at zero: a negative value is
    still a valid (vacuous) lower bound, and callers comparing against
    chi_F apply max(lower, 0) themselves.
    """
    beta = fam.beta
    return upper_bound(fam, tols) - beta * beta * beta * double_commutator(fam, tols) / 48.0


def free_energy_curvature(
    fam: PerturbedFamily,
    tols: Tolerances = DEFAULT_TOLS,
    *,
    step: float = 1e-3,
) -> float:
    """Measure -d^2f/dh^2 at h = 0 by Richardson-extrapolated differences.

    f(h) = -ln Z(h)/(beta N) is the free energy density of the shifted
    Hamiltonian T - h S.  The value returned is an independent oracle for
    ``thermo_susceptibility``: it never touches the spectral pair sums,
    only ln Z at four displaced fields.  The effective step is
    ``step / sqrt(max(1, beta))``; see ``thermo_susceptibility`` for why.
    """
    beta = fam.beta
    n = fam.particle_count
    h_eff = step / np.sqrt(max(1.0, beta))
    f0 = -fam.ensemble.log_z / (beta * n)

    def free_energy(h: float) -> float:
        d, lp = _perturbed_spectrum(fam, h, tols)
        log_z = -float(lp[0]) - beta * float(d.eigenvalues[0])
        return -log_z / (beta * n)

    def second_diff(h: float) -> float:
        return (free_energy(h) - 2.0 * f0 + free_energy(-h)) / (h * h)

    return -(4.0 * second_diff(0.5 * h_eff) - second_diff(h_eff)) / 3.0


def thermo_susceptibility(
    fam: PerturbedFamily,
    tols: Tolerances = DEFAULT_TOLS,
    *,
    check: bool = True,
    step: float = 1e-3,
) -> float:
    """Thermodynamic susceptibility chi_N = (beta/N) (dS; dS).

    The static response of <S>/N to the field h, i.e. the second
    h-derivative of the free energy density with the sign flipped.  With
    ``check`` enabled (the default) that derivative is also measured
    directly by Richardson-extrapolated central differences of
    f(h) = -ln Z(h)/(beta N) and the two must agree; the finite
    difference costs four extra eigendecompositions, so sweeps over many
    points may disable it after the first point.

    The step shrinks as 1/sqrt(beta) above beta = 1.  The floor on the
    second difference of ln Z is the absolute rounding of the computed
    eigenvalues, eps ||T||, amplified by 1/h^2, so steps much below 1e-3
    measure noise; the Richardson truncation term grows as (beta h)^4,
    so a fixed 1e-3 step loses accuracy at large beta.  The square-root
    schedule keeps both contributions near 1e-7 over the working range.

    Raises
    ------
    CrossCheckError
        check "chi_n_oracle" if the finite difference disagrees beyond
        ``tols.fd_oracle_rel``.
    """
    beta = fam.beta
    n = fam.particle_count
    chi = beta * bd_inner_product(fam, tols) / n
    if check:
        fd = free_energy_curvature(fam, tols, step=step)
        if abs(chi - fd) > tols.fd_oracle_rel * max(1.0, abs(chi)):
            raise CrossCheckError(
                "chi_n_oracle",
                f"spectral chi_N {chi!r} and free-energy finite difference {fd!r} "
                f"disagree beyond {tols.fd_oracle_rel:g} relative",
            )
    return chi


@dataclass(frozen=True)
class PerParticleBounds:
    """Extensive report entries divided by the particle count."""

    chi_f: float
    upper: float
    lower_paper: float
    lower_aasc: float
    ds2: float
    bd_product: float
    dcomm: float


@dataclass(frozen=True)
class BoundReport:
    """Everything the sandwich says about one family at one beta.

    ``lower_paper`` is the commutator-corrected lower bound (it may be
    negative, in which case zero is the binding constraint);
    ``lower_aasc`` is chi_F^G, which lower-bounds chi_F for free because
    the integrated kernel is pointwise smaller.  ``sandwich_ok`` records
    whether max(lower_paper, lower_aasc, 0) <= chi_f <= upper held to
    within the configured slack.  ``per_particle`` is populated when the
    family declares more than one particle.
    """

    beta: float
    particle_count: int
    bd_product: float
    dcomm: float
    upper: float
    lower_paper: float
    lower_aasc: float
    chi_f: float
    chi_f_classical: float
    chi_f_quantum: float
    chi_n: float
    ds2: float
    degenerate_pair_count: int
    sandwich_ok: bool
    per_particle: Optional[PerParticleBounds] = None


def bound_report(
    fam: PerturbedFamily,
    tols: Tolerances = DEFAULT_TOLS,
    *,
    check_chi_n: bool = True,
) -> BoundReport:
    """Evaluate chi_F together with every bound and cross-check at once.

    One eigendecomposition (already inside ``fam``) serves all entries;
    the only optional extra cost is the chi_N finite-difference oracle,
    forwarded through ``check_chi_n``.
    """
    beta = fam.beta
    chi = chi_f_spectral(fam, tols)
    bd = bd_inner_product(fam, tols)
    dcomm = double_commutator(fam, tols)
    upper = 0.25 * beta * beta * bd
    lower = upper - beta * beta * beta * dcomm / 48.0
    aasc = chi_fg_spectral(fam, tols)
    ds2 = ds2_spectral(fam, tols)
    chi_n = thermo_susceptibility(fam, tols, check=check_chi_n)

    slack = tols.sandwich_slack * max(1.0, abs(chi.total))
    ok = bool(
        max(lower, aasc, 0.0) - slack <= chi.total <= upper + slack
    )

    n = fam.particle_count
    per = None
    if n > 1:
        per = PerParticleBounds(
            chi_f=chi.total / n,
            upper=upper / n,
            lower_paper=lower / n,
            lower_aasc=aasc / n,
            ds2=ds2 / n,
            bd_product=bd / n,
            dcomm=dcomm / n,
        )
    return BoundReport(
        beta=beta,
        particle_count=n,
        bd_product=bd,
        dcomm=dcomm,
        upper=upper,
        lower_paper=lower,
        lower_aasc=aasc,
        chi_f=chi.total,
        chi_f_classical=chi.classical,
        chi_f_quantum=chi.quantum,
        chi_n=chi_n,
        ds2=ds2,
        degenerate_pair_count=chi.degenerate_pair_count,
        sandwich_ok=ok,
        per_particle=per,
    )
