"""Dense Hermitian linear algebra.

The eigensolver is a self-contained cyclic Jacobi iteration for complex
Hermitian matrices.  It is deterministic (fixed pivot order, stable tie
break, pinned eigenvector phases), accurate at desk scale, and carries
its own residual checks so downstream spectral sums can trust the
decomposition without re-validating.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    NegativeEigenvalueError,
    NoConvergenceError,
    NonFiniteError,
    NotHermitianError,
    NotSquareError,
)

__all__ = [
    "HermitianOperator",
    "SpectralDecomposition",
    "validate_hermitian",
    "eig_hermitian",
    "apply_spectral_function",
    "psd_sqrt",
]


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A validated Hermitian matrix.

    Attributes
    ----------
    matrix : ndarray
        Complex128 square array, symmetrized and marked read-only.
    dim : int
        Matrix dimension.
    """

    matrix: np.ndarray
    dim: int


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues and eigenbasis of a Hermitian operator.

    Attributes
    ----------
    eigenvalues : ndarray
        Real eigenvalues in nondecreasing order.
    basis : ndarray
        Unitary matrix whose columns are the eigenvectors, in the same
        order.  Each column's largest-magnitude component is real and
        positive.
    dim : int
        Dimension of the decomposed operator.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    dim: int


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def validate_hermitian(matrix, tols: Tolerances = DEFAULT_TOLS) -> HermitianOperator:
    """Check and wrap a matrix as a Hermitian operator.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix.
    tols : Tolerances, optional
        Tolerance record; ``hermitian_rel`` bounds the allowed asymmetry
        relative to ``max(1, ||M||_F)``.

    Returns
    -------
    HermitianOperator
        Wrapper around the symmetrized matrix ``(M + M^H)/2``.

    Raises
    ------
    NotSquareError
        If the input is not a square 2-d array.
    NonFiniteError
        If any entry is NaN or infinite.
    NotHermitianError
        If the asymmetry exceeds tolerance.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    scale = max(1.0, float(np.linalg.norm(m)))
    asym = float(np.linalg.norm(m - m.conj().T))
    if asym > tols.hermitian_rel * scale:
        raise NotHermitianError(
            f"asymmetry {asym:.3e} exceeds {tols.hermitian_rel:.1e} * {scale:.3e}"
        )
    sym = 0.5 * (m + m.conj().T)
    return HermitianOperator(matrix=_freeze(sym), dim=sym.shape[0])


def _offdiag_sq(a):
    # summed from the off-diagonal entries themselves; forming
    # ||A||_F^2 - ||diag||^2 would cancel to noise near convergence
    abs2 = a.real * a.real + a.imag * a.imag
    np.fill_diagonal(abs2, 0.0)
    return float(abs2.sum())


def _jacobi(matrix, tols: Tolerances):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Sweeps pivots in fixed row-major order, so the rotation sequence and
    therefore every output bit is reproducible for identical input.
    """
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(a))
    if n == 1 or fro == 0.0:
        return np.diagonal(a).real.copy(), v
    thresh = tols.jacobi_off_frobenius * fro
    # rotations on elements below skip_tol cannot lift the total
    # off-diagonal norm above thresh, so they are not worth applying
    skip_tol = thresh / n
    for sweep in range(tols.jacobi_max_sweeps + 1):
        if math.sqrt(_offdiag_sq(a)) <= thresh:
            break
        if sweep == tols.jacobi_max_sweeps:
            raise NoConvergenceError(
                f"jacobi got stuck above threshold after {tols.jacobi_max_sweeps} sweeps"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip_tol:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                w = apq / mag
                wc = w.conjugate()
                # unitary U embeds [[c, s], [-s wc, c wc]] at (p, q)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - (s * wc) * col_q
                a[:, q] = s * col_p + (c * wc) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - (s * w) * row_q
                a[q, :] = s * row_p + (c * w) * row_q
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - (s * wc) * vcol_q
                v[:, q] = s * vcol_p + (c * wc) * vcol_q
    return np.diagonal(a).real.copy(), v


def eig_hermitian(op: HermitianOperator, tols: Tolerances = DEFAULT_TOLS) -> SpectralDecomposition:
    """Diagonalize a Hermitian operator.

    Eigenvalues are sorted nondecreasing with ties broken by original
    Jacobi output order (stable sort), and each eigenvector's phase is
    fixed by making its largest-magnitude component real positive.

    Raises
    ------
    NoConvergenceError
        If the sweep budget runs out, or the decomposition fails its own
        residual or unitarity check.
    """
    evals, basis = _jacobi(op.matrix, tols)
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    basis = basis[:, order]
    for j in range(op.dim):
        i = int(np.argmax(np.abs(basis[:, j])))
        z = basis[i, j]
        m = abs(z)
        if m > 0.0:
            basis[:, j] *= z.conjugate() / m
    resid = float(np.linalg.norm(op.matrix @ basis - basis * evals))
    scale = max(1.0, float(np.linalg.norm(op.matrix)))
    if resid > tols.eig_residual * scale:
        raise NoConvergenceError(f"eigendecomposition residual {resid:.3e} too large")
    unit = float(np.linalg.norm(basis.conj().T @ basis - np.eye(op.dim)))
    if unit > tols.basis_unitarity * op.dim:
        raise NoConvergenceError(f"eigenbasis unitarity defect {unit:.3e} too large")
    return SpectralDecomposition(
        eigenvalues=_freeze(evals), basis=_freeze(basis), dim=op.dim
    )


def apply_spectral_function(decomp: SpectralDecomposition, func) -> np.ndarray:
    """Assemble ``B diag(f(lambda)) B^H`` for a real function ``f``.

    Parameters
    ----------
    decomp : SpectralDecomposition
        Decomposition to act on.
    func : callable
        Maps a 1-d array of eigenvalues to real values elementwise.

    Returns
    -------
    ndarray
        Hermitian matrix function of the operator (symmetrized).

    Raises
    ------
    NonFiniteError
        If ``f`` produces NaN or infinity on any eigenvalue.
    """
    vals = np.asarray(func(decomp.eigenvalues), dtype=float)
    if vals.shape != decomp.eigenvalues.shape:
        vals = np.array([float(func(x)) for x in decomp.eigenvalues])
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("spectral function produced non-finite values")
    m = (decomp.basis * vals) @ decomp.basis.conj().T
    return 0.5 * (m + m.conj().T)


def psd_sqrt(op_or_decomp, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Principal square root of a positive semidefinite operator.

    Eigenvalues in ``[-psd_clip, 0)`` are treated as rounding noise and
    clipped to zero; anything more negative raises.

    Parameters
    ----------
    op_or_decomp : HermitianOperator or SpectralDecomposition
        Operator to take the root of.

    Raises
    ------
    NegativeEigenvalueError
        If an eigenvalue is below ``-psd_clip``.
    """
    if isinstance(op_or_decomp, SpectralDecomposition):
        decomp = op_or_decomp
    else:
        decomp = eig_hermitian(op_or_decomp, tols)
    low = float(decomp.eigenvalues.min()) if decomp.dim else 0.0
    if low < -tols.psd_clip:
        raise NegativeEigenvalueError(
            f"eigenvalue {low:.3e} below clip tolerance -{tols.psd_clip:.1e}"
        )
    return apply_spectral_function(decomp, lambda lam: np.sqrt(np.clip(lam, 0.0, None)))


def singular_values_onesided(b: np.ndarray) -> np.ndarray:
    """Singular values of a square complex matrix, descending.

    One-sided rotations orthogonalize the columns in place, so each
    singular value is read off as a plain column norm at the end.  Tiny
    singular values then inherit the relative accuracy of the matrix
    entries instead of the absolute accuracy of a formed Gram matrix,
    which matters when the values span hundreds of orders of magnitude
    and feed a square root (the fidelity finite difference does exactly
    that).
    """
    a = np.array(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix contains non-finite entries")
    n = a.shape[0]
    if n < 2:
        return np.linalg.norm(a, axis=0)
    tol = 1e-14
    for _ in range(60):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                u = a[:, p].copy()
                v = a[:, q].copy()
                app = float(np.vdot(u, u).real)
                aqq = float(np.vdot(v, v).real)
                apq = complex(np.vdot(u, v))
                mag = abs(apq)
                if app == 0.0 or aqq == 0.0 or mag <= tol * math.sqrt(app * aqq):
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                w = apq / mag
                wc = w.conjugate()
                a[:, p] = c * u - (s * wc) * v
                a[:, q] = s * u + (c * wc) * v
        if not rotated:
            break
    else:
        raise NoConvergenceError("one-sided rotations did not orthogonalize columns")
    # scaled column norms: a plain sum of squares would underflow first
    # for columns below sqrt(smallest normal)
    peak = np.max(np.abs(a), axis=0)
    safe = np.where(peak == 0.0, 1.0, peak)
    norms = peak * np.sqrt(np.sum(np.abs(a / safe) ** 2, axis=0))
    return np.sort(norms)[::-1]
