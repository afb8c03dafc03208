"""Scalar kernels shared by the spectral sums.

These are the small, numerically delicate pieces: every routine here is
well defined for all real arguments, switches to a series where direct
evaluation would lose precision, and stays inside its proven envelope.
"""

import numpy as np

from .config import DEFAULT_TOLS

def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# Taylor coefficients of (e^x (x - 1) + 1) / x^2 = sum_{k>=2} (k-1) x^(k-2) / k!
_G_COEFFS = tuple((k - 1) / _factorial(k) for k in range(2, 15))


def tanh_over_x(x, series_cutoff=None):
    """Evaluate ``tanh(x)/x`` with its removable singularity filled in.

    Below ``series_cutoff`` the truncated series ``1 - x^2/3 + 2x^4/15``
    is used.  The returned values are clamped into ``[1 - x^2/3, 1]``:
    the bounds hold exactly in real arithmetic, and raw ``tanh`` rounding
    can otherwise stray one ulp outside near the switchover.

    Parameters
    ----------
    x : array_like
        Real argument, any sign.
    series_cutoff : float, optional
        Switch point for the series branch.

    Returns
    -------
    ndarray or float
        ``tanh(x)/x``, even in ``x``, inside ``[1 - x^2/3, 1]``.
    """
    if series_cutoff is None:
        series_cutoff = DEFAULT_TOLS.kernel_series_cutoff
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    a = np.abs(np.atleast_1d(arr))
    x2 = a * a
    lower = 1.0 - x2 / 3.0
    small = a < series_cutoff
    safe = np.where(small, 1.0, a)
    direct = np.tanh(safe) / safe
    series = lower + (2.0 / 15.0) * x2 * x2
    out = np.where(small, series, direct)
    out = np.minimum(out, 1.0)
    out = np.maximum(out, lower)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def expm1_over_x(x):
    """Evaluate ``(e^x - 1)/x`` continuously through zero."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr)
    safe = np.where(a == 0.0, 1.0, a)
    out = np.where(a == 0.0, 1.0, np.expm1(safe) / safe)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def expx_xm1_over_x2(x):
    """Evaluate ``g(x) = (e^x (x - 1) + 1) / x^2`` stably.

    The direct form cancels catastrophically near zero, so ``|x| < 0.5``
    uses the series ``sum_{k>=2} (k-1) x^(k-2) / k!`` truncated where the
    terms drop below double rounding.  ``g`` is the per-pair weight of
    the imaginary-time integral ``int_0^b tau e^(a tau) d tau = b^2 g(ab)``.

    Callers must keep ``x`` small enough that ``e^x`` does not overflow;
    large positive arguments are handled upstream in log space.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr)
    small = np.abs(a) < 0.5
    series = np.zeros_like(a)
    for c in reversed(_G_COEFFS):
        series = series * a + c
    safe = np.where(small, 1.0, a)
    direct = (np.exp(safe) * (safe - 1.0) + 1.0) / (safe * safe)
    out = np.where(small, series, direct)
    return float(out[0]) if scalar else out.reshape(arr.shape)
