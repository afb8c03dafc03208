"""Fidelity susceptibility of one-parameter Gibbs families, exactly.

For a family H(h) = T - h S at inverse temperature beta, this package
evaluates the thermal-state fidelity susceptibility chi_F at h = 0 from
the exact spectral representation, together with the quantities that
sandwich it: the Bogoliubov-Duhamel upper bound, the double-commutator
lower correction, the Green's-function variant chi_FG, and the ordinary
thermodynamic susceptibility chi_N.  Everything is cross-checked against
an independent second route (finite differences, quadratures, direct
commutators), and the checks raise instead of warning.

Entry points: `make_family` builds a family from matrices, the model
builders in `fidsus.models` construct the closed-form and random test
systems, `bound_report` evaluates one family completely, and the
``fidsus`` command line wraps reports, sweeps, and the verification
suite.
"""

from .bounds import (
    BoundReport,
    PerParticleBounds,
    bd_inner_product,
    bd_integral_oracle,
    bound_report,
    double_commutator,
    double_commutator_direct,
    free_energy_curvature,
    kernel_xcothx_inv,
    lower_bound,
    thermo_susceptibility,
    upper_bound,
)
from .config import DEFAULT_TOLS, Tolerances
from .fidelity import (
    ChiFGIntegral,
    FidelitySusceptibility,
    TaylorRemainder,
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
from .gibbs import (
    GibbsEnsemble,
    PerturbedFamily,
    build_gibbs,
    build_gibbs_from_spectrum,
    correlation_G,
    family_at_beta,
    make_family,
    thermal_average,
)
from .kernels import expm1_over_x, expx_xm1_over_x2, tanh_over_x
from .models import (
    MODEL_KINDS,
    DickeTc,
    KondoBoundRecord,
    ModelSpec,
    SingleSpinClosedForms,
    build_model,
    dicke,
    dicke_cutoff_shift,
    dicke_tc,
    kondo_roepstorff,
    kondo_toy,
    model_from_file,
    random_pair,
    single_spin,
    single_spin_closed_forms,
    tfim,
)
from .sweep import SweepRow, SweepSpec, run_sweep
from .verify import VerifySummary, run_verify

__version__ = "1.0.0"

__all__ = [
    "BoundReport",
    "ChiFGIntegral",
    "DEFAULT_TOLS",
    "DickeTc",
    "FidelitySusceptibility",
    "GibbsEnsemble",
    "KondoBoundRecord",
    "MODEL_KINDS",
    "ModelSpec",
    "PerParticleBounds",
    "PerturbedFamily",
    "SingleSpinClosedForms",
    "SweepRow",
    "SweepSpec",
    "TaylorRemainder",
    "Tolerances",
    "VerifySummary",
    "bd_inner_product",
    "bd_integral_oracle",
    "bound_report",
    "build_gibbs",
    "build_gibbs_from_spectrum",
    "build_model",
    "bures_distance",
    "chi_f_fd",
    "chi_f_ground_state",
    "chi_f_spectral",
    "chi_fg_integral",
    "chi_fg_spectral",
    "correlation_G",
    "dicke",
    "dicke_cutoff_shift",
    "dicke_tc",
    "double_commutator",
    "double_commutator_direct",
    "ds2_spectral",
    "expm1_over_x",
    "expx_xm1_over_x2",
    "family_at_beta",
    "free_energy_curvature",
    "gf_fidelity",
    "kernel_xcothx_inv",
    "kondo_roepstorff",
    "kondo_toy",
    "lower_bound",
    "make_family",
    "model_from_file",
    "perturbed_density",
    "random_pair",
    "rho_prime",
    "rho_taylor_check",
    "run_sweep",
    "run_verify",
    "single_spin",
    "single_spin_closed_forms",
    "tanh_over_x",
    "tfim",
    "thermal_average",
    "thermo_susceptibility",
    "uhlmann_fidelity",
    "upper_bound",
    "__version__",
]
