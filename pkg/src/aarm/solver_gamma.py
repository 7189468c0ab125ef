"""Componentwise variance (gamma) update from the stationarity equations."""

from __future__ import annotations

import numpy as np

from .linalg import DimensionError
from .prior import HyperPriorParams

__all__ = [
    "GAMMA_MIN",
    "GammaBracketError",
    "stationarity_residual",
    "closed_form_gamma",
    "solve_gamma_component",
    "update_gamma",
]

GAMMA_MIN = 1e-10
_GAMMA_LO = 1e-12
_MAX_DOUBLINGS = 200


class GammaBracketError(RuntimeError):
    """No sign change found for the stationarity equation."""


def _coefficients(F, p):
    F = np.asarray(F, dtype=float)
    p = np.asarray(p)
    a = np.where(p == 1, 0.25 * np.abs(F), 0.5 * F * F)
    e = np.where(p == 1, 1.5, 2.0)
    return a, e


def stationarity_residual(gamma, F, p, params: HyperPriorParams):
    """Derivative of the per-component variance objective.

    ``-(1/4)|F| g^{-3/2}`` (exponent 1) or ``-(1/2) F^2 g^{-2}`` (exponent 2),
    plus ``r g^{r-1} / gbar^r - (r beta - 3/2) / g``.
    """
    a, e = _coefficients(F, p)
    gamma = np.asarray(gamma, dtype=float)
    r, gb = params.r, params.gamma_bar
    return -a * gamma**-e + r * gamma ** (r - 1.0) / gb**r - params.log_coefficient / gamma


def _residual_derivative(gamma, a, e, params: HyperPriorParams):
    r, gb = params.r, params.gamma_bar
    return (
        a * e * gamma ** (-e - 1.0)
        + r * (r - 1.0) * gamma ** (r - 2.0) / gb**r
        + params.log_coefficient / gamma**2
    )


def closed_form_gamma(F, params: HyperPriorParams):
    """Positive root for ``r = 1`` and exponent 2:
    ``gamma^2/gbar - c gamma - F^2/2 = 0`` with ``c = beta - 3/2``."""
    if params.r != 1.0:
        raise ValueError("closed form only available for r = 1")
    F = np.asarray(F, dtype=float)
    c = params.log_coefficient
    gb = params.gamma_bar
    return 0.5 * gb * (c + np.sqrt(c * c + 2.0 * F * F / gb))


def _solve_roots(F, p, params: HyperPriorParams) -> np.ndarray:
    F = np.atleast_1d(np.asarray(F, dtype=float))
    p = np.atleast_1d(np.asarray(p))
    a, e = _coefficients(F, p)
    lo = np.full(F.shape, _GAMMA_LO)
    hi = np.maximum(np.maximum(1.0, params.gamma_bar), F * F + 1.0)

    def res(g):
        return stationarity_residual(g, F, p, params)

    pending = res(hi) <= 0
    for _ in range(_MAX_DOUBLINGS):
        if not pending.any():
            break
        hi = np.where(pending, 2.0 * hi, hi)
        pending = res(hi) <= 0
    if pending.any():
        raise GammaBracketError(
            f"no sign change for gamma stationarity after {_MAX_DOUBLINGS} doublings"
        )
    if np.any(res(lo) >= 0):
        raise GammaBracketError("stationarity residual is non-negative at the lower bracket")

    # geometric bisection down to a few ulps
    for _ in range(200):
        mid = np.sqrt(lo * hi)
        neg = res(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
        if np.all(hi - lo <= 4.0 * np.finfo(float).eps * hi):
            break

    # safeguarded Newton polish
    g = np.sqrt(lo * hi)
    for _ in range(3):
        step = res(g) / _residual_derivative(g, a, e, params)
        trial = g - step
        inside = (trial >= lo) & (trial <= hi) & np.isfinite(trial)
        better = inside & (np.abs(res(np.where(inside, trial, g))) <= np.abs(res(g)))
        g = np.where(better, trial, g)
    return g


def solve_gamma_component(F_ell: float, p_ell: int, params: HyperPriorParams) -> float:
    """Positive root of the stationarity equation for one component.

    Uses the closed form when ``r = 1`` and the exponent is 2, otherwise a
    bracketed geometric bisection polished by Newton steps.
    """
    if p_ell not in (1, 2):
        raise ValueError(f"exponent must be 1 or 2, got {p_ell}")
    params.check_solvable()
    if params.r == 1.0 and p_ell == 2:
        return float(closed_form_gamma(F_ell, params))
    return float(_solve_roots(F_ell, p_ell, params)[0])


def update_gamma(F, p_theta, params: HyperPriorParams) -> np.ndarray:
    """Solve every component, floored at ``GAMMA_MIN``."""
    F = np.asarray(F, dtype=float)
    p = np.asarray(p_theta)
    if F.shape != p.shape:
        raise DimensionError(f"F has length {F.shape}, exponents have length {p.shape}")
    params.check_solvable()
    gamma = np.empty_like(F)
    closed = (p == 2) if params.r == 1.0 else np.zeros(F.shape, dtype=bool)
    if closed.any():
        gamma[closed] = closed_form_gamma(F[closed], params)
    if (~closed).any():
        gamma[~closed] = _solve_roots(F[~closed], p[~closed], params)
    return np.maximum(gamma, GAMMA_MIN)
