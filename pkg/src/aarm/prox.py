"""Closed-form minimizers of the split ``w``-subproblems and a brute-force
1-D minimizer used to validate them."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .linalg import DimensionError

__all__ = ["prox_abs", "prox_square", "brute_force_1d_argmin", "apply_split_w"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def prox_abs(t, lambda_tilde: float, weight: float = 0.5):
    """Minimizer of ``weight*|w| + (lambda_tilde/2)*(w - t)**2``.

    Soft thresholding at ``weight / lambda_tilde``; the default weight 1/2
    is the coefficient of the l1 part of the mixed norm.
    """
    if not lambda_tilde > 0:
        raise ValueError(f"lambda_tilde must be positive, got {lambda_tilde}")
    t = np.asarray(t, dtype=float)
    out = np.sign(t) * np.maximum(np.abs(t) - weight / lambda_tilde, 0.0)
    return float(out) if out.ndim == 0 else out


def prox_square(t, lambda_tilde: float):
    """Minimizer of ``(1/2)*w**2 + (lambda_tilde/2)*(w - t)**2``."""
    if not lambda_tilde > 0:
        raise ValueError(f"lambda_tilde must be positive, got {lambda_tilde}")
    out = lambda_tilde * np.asarray(t, dtype=float) / (lambda_tilde + 1.0)
    return float(out) if out.ndim == 0 else out


def _evaluate_grid(objective, xs):
    try:
        vals = np.asarray(objective(xs), dtype=float)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([objective(x) for x in xs], dtype=float)


def brute_force_1d_argmin(
    objective: Callable[[float], float], lo: float, hi: float, grid_points: int = 2001
) -> float:
    """Grid search followed by golden-section refinement.

    The objective is sampled on ``grid_points`` equispaced points of
    ``[lo, hi]``; the best sample and its two neighbours bracket the
    refinement, which runs until the bracket is below ``1e-13`` wide.
    Reliable for unimodal objectives; for others it returns a local
    minimizer near the best grid sample.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if grid_points < 3:
        raise ValueError("need at least three grid points")
    xs = np.linspace(lo, hi, grid_points)
    vals = _evaluate_grid(objective, xs)
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, grid_points - 1)]
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-13 * max(1.0, abs(a) + abs(b)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(d)
    x = 0.5 * (a + b)
    # keep the grid sample if refinement drifted to a worse point
    return float(x) if objective(x) <= vals[i] else float(xs[i])


def apply_split_w(target, p_theta, lambda_tilde: float, l1_weight: float = 0.5) -> np.ndarray:
    """Solve the separable ``w``-subproblem componentwise.

    Components with exponent 1 are soft-thresholded, components with
    exponent 2 are scaled; the two restricted vectors are disjoint so their
    sum is returned directly.
    """
    target = np.asarray(target, dtype=float)
    p = np.asarray(p_theta)
    if target.shape != p.shape:
        raise DimensionError(
            f"target has length {target.shape}, exponents have length {p.shape}"
        )
    return np.where(
        p == 1,
        prox_abs(target, lambda_tilde, l1_weight),
        prox_square(target, lambda_tilde),
    )
