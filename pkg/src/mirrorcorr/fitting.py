"""Least-squares power-law fits on log-log grids."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, FitError


def fit_power_law(
    x,
    y,
    forced_exponent: float | None = None,
    residual_threshold: float | None = None,
) -> tuple[float, float, float]:
    """Fit y = coefficient * x^exponent by least squares in log space.

    Returns (coefficient, exponent, rms log-residual).  With
    ``forced_exponent`` only the coefficient is fitted and the residual
    measures the misfit of the imposed slope.  When a threshold is given,
    exceeding it raises FitError carrying the (x, y) data.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
        raise DomainError("fit_power_law needs matching 1-D arrays of length >= 2")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fit requires strictly positive data")
    lx = np.log(x)
    ly = np.log(y)
    if forced_exponent is None:
        design = np.column_stack([np.ones_like(lx), lx])
        sol, *_ = np.linalg.lstsq(design, ly, rcond=None)
        log_coeff, exponent = sol
    else:
        exponent = float(forced_exponent)
        log_coeff = float(np.mean(ly - exponent * lx))
    resid = ly - (log_coeff + exponent * lx)
    rms = float(np.sqrt(np.mean(resid**2)))
    if residual_threshold is not None and rms > residual_threshold:
        raise FitError(
            f"power-law fit residual {rms:.3e} exceeds threshold {residual_threshold:.3e}",
            data=(x.tolist(), y.tolist()),
        )
    return float(np.exp(log_coeff)), float(exponent), rms
