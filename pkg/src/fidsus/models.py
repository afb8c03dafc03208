"""Model builders: closed-form, many-body, random, and file-defined families.

Each builder returns a `PerturbedFamily` ready for the fidelity and
bound machinery.  Builders are pure given their arguments (the random
generator is seeded explicitly), and the nontrivial ones verify a known
structural property of their own output before returning: the Kondo
builder checks rotational invariance of the impurity averages, the
Dicke builder probes its boson cutoff by rebuilding four levels higher.

Conventions fixed here and relied on by the matrix-file round trip:

* tensor factors are ordered boson (x) atoms for the Dicke space and
  fermion modes (x) impurity for the Kondo space;
* fermionic operators use the Jordan-Wigner chain over the mode list
  (k0 up, k0 down, k1 up, k1 down, ...), qubit |1> meaning occupied;
* the conduction spin density at the impurity site carries an explicit
  1/M normalization, M being the number of retained modes.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    CrossCheckError,
    CutoffConvergenceWarning,
    DimensionBudgetError,
    ModelParseError,
    ModelSchemaError,
    NoTransitionError,
)
from .fidelity import chi_f_spectral
from .gibbs import PerturbedFamily, make_family, thermal_average

__all__ = [
    "DickeTc",
    "KondoBoundRecord",
    "MODEL_KINDS",
    "ModelSpec",
    "SingleSpinClosedForms",
    "build_model",
    "dicke",
    "dicke_cutoff_shift",
    "dicke_tc",
    "kondo_roepstorff",
    "kondo_toy",
    "model_from_file",
    "random_pair",
    "single_spin",
    "single_spin_closed_forms",
    "tfim",
]

DIMENSION_BUDGET = 4096

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)


# ---------------------------------------------------------------------------
# single spin


def single_spin(h3: float, tols: Tolerances = DEFAULT_TOLS) -> PerturbedFamily:
    """Single spin-1/2 in a field: T = -h3 sigma_z, S = sigma_x, beta = 1.

    The inverse temperature is absorbed into the dimensionless field h3,
    so the family is always built at beta = 1 and every closed form in
    `single_spin_closed_forms` can be compared literally.
    """
    h3 = float(h3)
    if not math.isfinite(h3):
        raise ValueError(f"h3 must be finite, got {h3!r}")
    return make_family(-h3 * _SZ, _SX, 1.0, tols=tols)


@dataclass(frozen=True)
class SingleSpinClosedForms:
    """Exact values for the single-spin family at field h3."""

    chi_f: float
    bd_product: float
    dcomm: float
    lower: float


def single_spin_closed_forms(h3: float) -> SingleSpinClosedForms:
    """Closed forms: chi_F, the BD product, the double commutator, and
    the lower bound, all as elementary functions of h3.

    At h3 = 0 the limits are 1/4, 1, 0, 1/4 respectively.
    """
    h3 = float(abs(h3))
    if h3 == 0.0:
        return SingleSpinClosedForms(chi_f=0.25, bd_product=1.0, dcomm=0.0, lower=0.25)
    th = math.tanh(h3)
    return SingleSpinClosedForms(
        chi_f=th * th / (4.0 * h3 * h3),
        bd_product=th / h3,
        dcomm=4.0 * h3 * th,
        lower=(th / (4.0 * h3)) * (1.0 - h3 * h3 / 3.0),
    )


# ---------------------------------------------------------------------------
# Dicke


def _boson_annihilator(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(1, n_max + 1):
        a[n - 1, n] = math.sqrt(n)
    return a


def _collective_spin(n_atoms: int) -> Tuple[np.ndarray, np.ndarray]:
    """(J_x, J_z) on the maximal-spin sector j = N/2, m descending."""
    j = 0.5 * n_atoms
    m = j - np.arange(n_atoms + 1)
    jz = np.diag(m).astype(complex)
    lower = np.zeros((n_atoms + 1, n_atoms + 1), dtype=complex)
    for i in range(n_atoms):
        # J- |j, m> = sqrt(j(j+1) - m(m-1)) |j, m-1>
        lower[i + 1, i] = math.sqrt(j * (j + 1.0) - m[i] * (m[i] - 1.0))
    jx = 0.5 * (lower + lower.conj().T)
    return jx, jz


def _site_spin(n_atoms: int) -> Tuple[np.ndarray, np.ndarray]:
    """(J_x, J_z) as sums of single-site Pauli halves on the full 2^N space."""
    dim = 2**n_atoms
    jx = np.zeros((dim, dim), dtype=complex)
    jz = np.zeros((dim, dim), dtype=complex)
    for site in range(n_atoms):
        left = np.eye(2**site, dtype=complex)
        right = np.eye(2 ** (n_atoms - site - 1), dtype=complex)
        jx += np.kron(np.kron(left, 0.5 * _SX), right)
        jz += np.kron(np.kron(left, 0.5 * _SZ), right)
    return jx, jz


def _dicke_matrices(
    n_atoms: int, n_max: int, omega: float, eps: float, lam: float, symmetric_sector: bool
) -> Tuple[np.ndarray, np.ndarray]:
    a = _boson_annihilator(n_max)
    quad = a + a.conj().T
    number = a.conj().T @ a
    if symmetric_sector:
        jx, jz = _collective_spin(n_atoms)
    else:
        jx, jz = _site_spin(n_atoms)
    atom_dim = jx.shape[0]
    eye_b = np.eye(n_max + 1, dtype=complex)
    eye_a = np.eye(atom_dim, dtype=complex)
    T = (
        omega * np.kron(number, eye_a)
        + eps * np.kron(eye_b, jz)
        + (lam / math.sqrt(n_atoms)) * np.kron(quad, jx)
    )
    S = 0.5 * math.sqrt(n_atoms) * np.kron(quad, eye_a)
    return T, S


def dicke(
    n_atoms: int,
    n_max: int,
    omega: float,
    eps: float,
    lam: float,
    beta: float,
    symmetric_sector: bool = False,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """N two-level atoms coupled to one bosonic mode, truncated at n_max.

    T = omega a*a + eps J_z + lam N^{-1/2}(a + a*) J_x with collective
    spin operators J_alpha = (1/2) sum_i sigma_i^alpha, and the driving
    term is the field quadrature S = sqrt(N)(a* + a)/2.  Basis order is
    Fock (x) atoms.

    By default the atomic factor is the full 2^N product space, which
    keeps the partition function honest for finite-size thermal
    averages.  ``symmetric_sector`` restricts to the maximal collective
    spin block j = N/2 of dimension N+1; that drops the multiplicities
    of the lower-spin blocks from Z, so sector results are comparable
    with each other but not term-by-term with the full space.

    Every build is followed by a cutoff probe: the family is rebuilt at
    n_max + 4 and the relative shift in chi_F is measured.  A shift
    above 1e-4 triggers `CutoffConvergenceWarning` (the probe is also
    skipped with a warning if the enlarged space would exceed the
    dimension budget).
    """
    n_atoms = int(n_atoms)
    n_max = int(n_max)
    if n_atoms < 1:
        raise ValueError(f"need at least one atom, got {n_atoms}")
    if n_max < 2:
        raise ValueError(f"boson cutoff must be at least 2, got {n_max}")
    if not (omega > 0.0 and lam > 0.0 and beta > 0.0):
        raise ValueError("omega, lam, beta must all be positive")
    if not symmetric_sector and n_atoms > 8:
        raise DimensionBudgetError(
            f"full product space not built above 8 atoms, got {n_atoms}; "
            "use symmetric_sector"
        )
    atom_dim = n_atoms + 1 if symmetric_sector else 2**n_atoms
    dim = (n_max + 1) * atom_dim
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(f"dimension {dim} exceeds budget {DIMENSION_BUDGET}")

    T, S = _dicke_matrices(n_atoms, n_max, omega, eps, lam, symmetric_sector)
    fam = make_family(T, S, beta, particle_count=n_atoms, tols=tols)

    probe_dim = (n_max + 5) * atom_dim
    if probe_dim > DIMENSION_BUDGET:
        warnings.warn(
            f"cutoff probe skipped: probe dimension {probe_dim} exceeds budget",
            CutoffConvergenceWarning,
            stacklevel=2,
        )
        return fam
    shift = dicke_cutoff_shift(fam, n_atoms, n_max, omega, eps, lam, beta,
                               symmetric_sector, tols)
    if shift > 1e-4:
        warnings.warn(
            f"chi_F shifts by {shift:.3e} relative when the boson cutoff grows "
            f"from {n_max} to {n_max + 4}; raise n_max",
            CutoffConvergenceWarning,
            stacklevel=2,
        )
    return fam


def dicke_cutoff_shift(
    fam: PerturbedFamily,
    n_atoms: int,
    n_max: int,
    omega: float,
    eps: float,
    lam: float,
    beta: float,
    symmetric_sector: bool = False,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Relative chi_F shift between the given family and n_max + 4."""
    T, S = _dicke_matrices(n_atoms, n_max + 4, omega, eps, lam, symmetric_sector)
    wide = make_family(T, S, beta, particle_count=n_atoms, tols=tols)
    chi = chi_f_spectral(fam, tols).total
    chi_wide = chi_f_spectral(wide, tols).total
    return abs(chi - chi_wide) / max(1.0, abs(chi))


@dataclass(frozen=True)
class DickeTc:
    """Critical temperature of the atom-field model, two conventions.

    ``tc_closed_form`` is the printed expression
    (|eps|/2) tanh(|eps| omega / 4 lam^2); ``tc_implicit`` solves the
    standard implicit condition tanh(|eps|/(2 T_c)) = |eps| omega /
    (4 lam^2).  The two do not agree in general and are exposed side by
    side without adjudication; sweeps in this package locate finite-size
    peaks against ``tc_implicit``.
    """

    tc_closed_form: float
    tc_implicit: Optional[float]


def dicke_tc(omega: float, eps: float, lam: float) -> DickeTc:
    """Both critical-temperature values for given couplings.

    Requires 4 lam^2 / omega >= |eps| (the condition for a transition
    to exist at some temperature); at exact equality the implicit value
    is 0 (the transition sits at T = 0), and at eps = 0 it is the limit
    2 lam^2 / omega.

    Raises
    ------
    NoTransitionError
        If 4 lam^2 / omega < |eps|, where no transition occurs.
    """
    if not (omega > 0.0 and lam > 0.0):
        raise ValueError("omega and lam must be positive")
    ae = abs(float(eps))
    r = ae * omega / (4.0 * lam * lam)
    if r > 1.0:
        raise NoTransitionError(
            f"4 lam^2/omega = {4.0 * lam * lam / omega:g} < |eps| = {ae:g}: "
            "no transition at any temperature"
        )
    tc_closed = 0.5 * ae * math.tanh(r)
    if ae == 0.0:
        return DickeTc(tc_closed_form=tc_closed, tc_implicit=2.0 * lam * lam / omega)
    if r == 1.0:
        return DickeTc(tc_closed_form=tc_closed, tc_implicit=0.0)

    def f(tc: float) -> float:
        return math.tanh(0.5 * ae / tc) - r

    # f decreases in tc from 1 - r > 0 toward -r < 0; bracket then bisect
    lo = 0.25 * ae
    while f(lo) < 0.0:
        lo *= 0.5
    hi = max(1.0, 4.0 * lam * lam / omega)
    while f(hi) > 0.0:
        hi *= 2.0
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return DickeTc(tc_closed_form=tc_closed, tc_implicit=0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# Kondo


def _spin_matrices(s2: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S1, S2, S3) for spin s = s2/2, m descending from +s."""
    s = 0.5 * s2
    m = s - np.arange(s2 + 1)
    s3 = np.diag(m).astype(complex)
    lower = np.zeros((s2 + 1, s2 + 1), dtype=complex)
    for i in range(s2):
        lower[i + 1, i] = math.sqrt(s * (s + 1.0) - m[i] * (m[i] - 1.0))
    s1 = 0.5 * (lower + lower.conj().T)
    s2m = 0.5j * (lower - lower.conj().T)
    return s1, s2m, s3


def _jw_annihilators(n_modes: int) -> List[np.ndarray]:
    """Jordan-Wigner annihilators for a chain of fermionic modes.

    Qubit |1> is occupied; mode j carries a Z string on all earlier
    modes, so anticommutation holds exactly.
    """
    z = np.diag([1.0, -1.0]).astype(complex)
    drop = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    ops = []
    for j in range(n_modes):
        factors = [z] * j + [drop] + [eye] * (n_modes - j - 1)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return ops


def kondo_toy(
    s2: int,
    mode_energies,
    j_coupling: float,
    beta: float,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """Magnetic impurity exchange-coupled to a few conduction modes.

    T = sum_k eps_k (n_{k up} + n_{k down})
        - J (S_1 n^x + S_2 n^y + S_3 n^z),

    where n^alpha = (1/M) sum_{k,k',sigma,sigma'} c*_{k sigma}
    (sigma^alpha/2)_{sigma sigma'} c_{k' sigma'} is the conduction spin
    density at the impurity site (every mode contributes amplitude
    1/sqrt(M) there, M = number of modes; the 1/M is a declared
    convention, since a finite mode set has no canonical continuum
    normalization).  The driving term is the impurity component S_3,
    i.e. a homogeneous field along z coupled to the impurity only.

    Hilbert space: (Jordan-Wigner chain over modes ordered k0 up,
    k0 down, k1 up, k1 down, ...) tensor (impurity spin s = s2/2,
    placed last).  The builder verifies rotational invariance of its
    own output, <S_3> = 0 and <S_3^2> = s(s+1)/3, and refuses to return
    a family violating either.

    Raises
    ------
    DimensionBudgetError
        If (2s+1) 4^M exceeds the dimension budget.
    CrossCheckError
        check "kondo_rotation" if the invariance checks fail.
    """
    s2 = int(s2)
    energies = [float(e) for e in mode_energies]
    n_modes = len(energies)
    if not 1 <= n_modes <= 3:
        raise ValueError(f"between 1 and 3 conduction modes supported, got {n_modes}")
    if s2 < 1:
        raise ValueError(f"s2 (twice the impurity spin) must be >= 1, got {s2}")
    fermion_dim = 4**n_modes
    dim = (s2 + 1) * fermion_dim
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(f"dimension {dim} exceeds budget {DIMENSION_BUDGET}")

    c = _jw_annihilators(2 * n_modes)  # order: k0 up, k0 down, k1 up, ...
    c_up = sum(c[2 * k] for k in range(n_modes))
    c_dn = sum(c[2 * k + 1] for k in range(n_modes))
    half = 1.0 / (2.0 * n_modes)
    # n^alpha = (1/M) C*_sigma (sigma^alpha/2)_{sigma sigma'} C_sigma'
    nx = half * (c_up.conj().T @ c_dn + c_dn.conj().T @ c_up)
    ny = half * (-1j * c_up.conj().T @ c_dn + 1j * c_dn.conj().T @ c_up)
    nz = half * (c_up.conj().T @ c_up - c_dn.conj().T @ c_dn)

    h0 = np.zeros((fermion_dim, fermion_dim), dtype=complex)
    for k, e in enumerate(energies):
        h0 += e * (
            c[2 * k].conj().T @ c[2 * k] + c[2 * k + 1].conj().T @ c[2 * k + 1]
        )

    s1, s2op, s3 = _spin_matrices(s2)
    eye_f = np.eye(fermion_dim, dtype=complex)
    eye_s = np.eye(s2 + 1, dtype=complex)
    T = (
        np.kron(h0, eye_s)
        - j_coupling * (np.kron(nx, s1) + np.kron(ny, s2op) + np.kron(nz, s3))
    )
    S = np.kron(eye_f, s3)
    fam = make_family(T, S, beta, tols=tols)

    spin = 0.5 * s2
    casimir_third = spin * (spin + 1.0) / 3.0
    mean = thermal_average(fam, fam.s_eig)
    b = fam.ensemble.spectrum.basis
    second = thermal_average(fam, b.conj().T @ np.kron(eye_f, s3 @ s3) @ b)
    if abs(mean) > 1e-12 or abs(second - casimir_third) > 1e-10:
        raise CrossCheckError(
            "kondo_rotation",
            f"rotational invariance violated: <S3> = {mean!r}, "
            f"<S3^2> = {second!r} vs s(s+1)/3 = {casimir_third!r}",
        )
    return fam


@dataclass(frozen=True)
class KondoBoundRecord:
    """Closed-form envelope for (4/beta) chi_F of the impurity model.

    chi_c is the Curie susceptibility beta s(s+1)/3 of the free spin;
    beta_eps is the dimensionless combination beta J tanh(beta J) /
    (2 s(s+1)); and the bracket [ (1-e^{-beta_eps})/beta_eps -
    beta_eps/3 ], clipped at zero, scales chi_c into the lower edge.
    x_star is the positive root of the bracket, so lower = 0 exactly
    when beta_eps >= x_star.  upper is chi_c itself.
    """

    chi_c: float
    beta_eps: float
    lower: float
    upper: float
    x_star: float


def _bracket(x: float) -> float:
    """(1 - e^{-x})/x - x/3, with the x -> 0 limit 1."""
    if x == 0.0:
        return 1.0
    return -math.expm1(-x) / x - x / 3.0


def kondo_roepstorff(beta: float, j_coupling: float, s2: int) -> KondoBoundRecord:
    """Bounds on (4/beta) chi_F from the Roepstorff inequalities.

    Purely arithmetic; no Hilbert space is built.  The envelope holds
    for the model with a free conduction band, so against the few-mode
    toy builder it is evaluated and reported rather than asserted.
    """
    if not (beta > 0.0 and j_coupling > 0.0):
        raise ValueError("beta and the exchange coupling must be positive")
    s2 = int(s2)
    if s2 < 1:
        raise ValueError(f"s2 must be >= 1, got {s2}")
    s = 0.5 * s2
    casimir = s * (s + 1.0)
    chi_c = beta * casimir / 3.0
    bj = beta * j_coupling
    beta_eps = bj * math.tanh(bj) / (2.0 * casimir)

    lo, hi = 1e-12, 3.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _bracket(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x_star = 0.5 * (lo + hi)

    lower = chi_c * max(0.0, _bracket(beta_eps))
    return KondoBoundRecord(
        chi_c=chi_c, beta_eps=beta_eps, lower=lower, upper=chi_c, x_star=x_star
    )


# ---------------------------------------------------------------------------
# random and lattice testbeds


def random_pair(
    dim: int,
    seed: int,
    t_scale: float = 1.0,
    s_scale: float = 1.0,
    beta: float = 1.0,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """GUE-style random (T, S) pair, deterministic per (seed, dim).

    T is drawn first, then S: each is a complex Gaussian matrix
    symmetrized as (G + G*)/2 and scaled.  Changing either scale to 0
    gives the corresponding zero operator.
    """
    dim = int(dim)
    if not 2 <= dim <= 64:
        raise ValueError(f"dim must be between 2 and 64, got {dim}")
    rng = np.random.default_rng(int(seed))

    def draw(scale: float) -> np.ndarray:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return scale * 0.5 * (g + g.conj().T)

    T = draw(float(t_scale))
    S = draw(float(s_scale))
    return make_family(T, S, beta, tols=tols)


def tfim(
    n_sites: int,
    j_coupling: float,
    g_field: float,
    beta: float,
    tols: Tolerances = DEFAULT_TOLS,
) -> PerturbedFamily:
    """Open transverse-field Ising chain driven by the total transverse field.

    T = -J sum_i sigma^z_i sigma^z_{i+1} - g sum_i sigma^x_i on an open
    chain, S = sum_i sigma^x_i, so the field h shifts g directly.
    N = n_sites.
    """
    n_sites = int(n_sites)
    if not 2 <= n_sites <= 10:
        raise ValueError(f"n_sites must be between 2 and 10, got {n_sites}")
    dim = 2**n_sites
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(f"dimension {dim} exceeds budget {DIMENSION_BUDGET}")

    def site_op(op: np.ndarray, i: int) -> np.ndarray:
        left = np.eye(2**i, dtype=complex)
        right = np.eye(2 ** (n_sites - i - 1), dtype=complex)
        return np.kron(np.kron(left, op), right)

    T = np.zeros((dim, dim), dtype=complex)
    for i in range(n_sites - 1):
        T -= j_coupling * site_op(_SZ, i) @ site_op(_SZ, i + 1)
    S = np.zeros((dim, dim), dtype=complex)
    for i in range(n_sites):
        S += site_op(_SX, i)
    T -= g_field * S
    return make_family(T, S, beta, particle_count=n_sites, tols=tols)


# ---------------------------------------------------------------------------
# matrix files


def _require_entry(value, path: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ModelSchemaError(f"{path}: expected an [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _parse_matrix(obj, name: str, dim: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ModelSchemaError(f'"{name}" must be a {dim}x{dim} array of [re, im] pairs')
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ModelSchemaError(f'"{name}" row {i} must have {dim} entries')
        for k, cell in enumerate(row):
            out[i, k] = _require_entry(cell, f'"{name}"[{i}][{k}]')
    return out


def model_from_file(path, tols: Tolerances = DEFAULT_TOLS) -> PerturbedFamily:
    """Build a family from a matrix file.

    The file is a UTF-8 text file holding exactly one JSON object with
    keys "dim" (integer), "beta" (real), optional "N" (integer, default
    1), and "T" and "S" as dim x dim arrays of [re, im] pairs.  Trailing
    content, NaN/Inf literals, unknown keys, and malformed entries are
    all rejected; Hermiticity is enforced by the family constructor.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()

    def no_constants(name: str):
        raise ModelParseError(f"non-finite literal {name!r} not allowed")

    try:
        obj = json.loads(text, parse_constant=no_constants)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"{path}: {exc}") from None

    if not isinstance(obj, dict):
        raise ModelSchemaError(f"{path}: top level must be one object")
    allowed = {"dim", "beta", "N", "T", "S"}
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ModelSchemaError(f"unknown keys {unknown}; allowed: {sorted(allowed)}")
    missing = sorted({"dim", "beta", "T", "S"} - set(obj))
    if missing:
        raise ModelSchemaError(f"missing required keys {missing}")

    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ModelSchemaError(f'"dim" must be a positive integer, got {dim!r}')
    beta = obj["beta"]
    if isinstance(beta, bool) or not isinstance(beta, (int, float)):
        raise ModelSchemaError(f'"beta" must be a real number, got {beta!r}')
    n = obj.get("N", 1)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ModelSchemaError(f'"N" must be a positive integer, got {n!r}')

    T = _parse_matrix(obj["T"], "T", dim)
    S = _parse_matrix(obj["S"], "S", dim)
    return make_family(T, S, float(beta), particle_count=n, tols=tols)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a family: kind plus parameter maps.

    ``parameters`` carries real-valued knobs, ``cutoffs`` integer ones
    (truncations, mode counts, sizes), ``seed`` feeds random kinds, and
    ``path`` points at a matrix file for kind "file".  Validation
    happens in `build_model`, which consults `MODEL_KINDS` for what each
    kind requires.
    """

    kind: str
    parameters: Dict[str, float] = field(default_factory=dict)
    cutoffs: Dict[str, int] = field(default_factory=dict)
    seed: Optional[int] = None
    path: Optional[str] = None


MODEL_KINDS: Dict[str, Dict[str, object]] = {
    "single_spin": {
        "parameters": {"h3": None},
        "cutoffs": {},
        "doc": "one spin-1/2, T = -h3 sigma_z, S = sigma_x, beta fixed at 1",
    },
    "dicke": {
        "parameters": {
            "omega": None,
            "eps": None,
            "lambda": None,
            "beta": None,
            "symmetric_sector": 0.0,
        },
        "cutoffs": {"n_atoms": None, "n_max": None},
        "doc": "N atoms and one boson mode; driving term is the field quadrature",
    },
    "kondo_toy": {
        "parameters": {"j": None, "beta": None, "eps0": 0.0, "eps1": 0.0, "eps2": 0.0},
        "cutoffs": {"s2": None, "modes": None},
        "doc": "impurity spin s2/2 exchange-coupled to 1-3 conduction modes",
    },
    "random": {
        "parameters": {"beta": None, "t_scale": 1.0, "s_scale": 1.0},
        "cutoffs": {"dim": None},
        "doc": "seeded GUE-style (T, S) pair",
    },
    "tfim": {
        "parameters": {"j": None, "g": None, "beta": None},
        "cutoffs": {"n_sites": None},
        "doc": "open Ising chain in a transverse field, driven by total sigma_x",
    },
    "file": {
        "parameters": {},
        "cutoffs": {},
        "doc": "T, S, beta read from a matrix file (see model_from_file)",
    },
}


def _collect(spec: ModelSpec, which: str) -> Dict[str, float]:
    """Merge declared defaults with the given values, rejecting strays."""
    declared = MODEL_KINDS[spec.kind][which]
    given = spec.parameters if which == "parameters" else spec.cutoffs
    unknown = sorted(set(given) - set(declared))
    if unknown:
        raise ModelSchemaError(
            f"kind {spec.kind!r} does not take {which} {unknown}; "
            f"declared: {sorted(declared)}"
        )
    merged = {}
    for name, default in declared.items():
        if name in given:
            merged[name] = given[name]
        elif default is not None:
            merged[name] = default
        else:
            raise ModelSchemaError(f"kind {spec.kind!r} requires {which[:-1]} {name!r}")
    return merged


def build_model(spec: ModelSpec, tols: Tolerances = DEFAULT_TOLS) -> PerturbedFamily:
    """Validate a `ModelSpec` and dispatch to the matching builder."""
    if spec.kind not in MODEL_KINDS:
        raise ModelSchemaError(
            f"unknown model kind {spec.kind!r}; known: {sorted(MODEL_KINDS)}"
        )
    if spec.kind == "file":
        if not spec.path:
            raise ModelSchemaError('kind "file" requires a path')
        return model_from_file(spec.path, tols)

    params = _collect(spec, "parameters")
    cutoffs = _collect(spec, "cutoffs")
    for name, value in cutoffs.items():
        if int(value) < 1:
            raise ModelSchemaError(f"cutoff {name!r} must be >= 1, got {value!r}")

    if spec.kind == "single_spin":
        return single_spin(params["h3"], tols)
    if spec.kind == "dicke":
        return dicke(
            cutoffs["n_atoms"],
            cutoffs["n_max"],
            params["omega"],
            params["eps"],
            params["lambda"],
            params["beta"],
            symmetric_sector=bool(params["symmetric_sector"]),
            tols=tols,
        )
    if spec.kind == "kondo_toy":
        energies = [params[f"eps{k}"] for k in range(int(cutoffs["modes"]))]
        return kondo_toy(cutoffs["s2"], energies, params["j"], params["beta"], tols)
    if spec.kind == "random":
        seed = 0 if spec.seed is None else int(spec.seed)
        return random_pair(
            cutoffs["dim"], seed, params["t_scale"], params["s_scale"], params["beta"], tols
        )
    return tfim(cutoffs["n_sites"], params["j"], params["g"], params["beta"], tols)
