"""Weight (theta) block: affine reduction of ``L_theta f`` and the Bregman
solve with post-hoc clipping to the unit box."""

from __future__ import annotations

import numpy as np

from .linalg import DimensionError, QRLeastSquares, as_matrix, as_vector
from .objective import ObjectiveContext
from .prox import apply_split_w
from .solver_f import BregmanParams

__all__ = ["build_Q_v", "update_theta_ls", "bregman_solve_theta"]


def build_Q_v(f, Lp, Lq):
    """Return ``Q = diag((Lq - Lp) f)`` and ``v = Lp f`` so that
    ``L_theta f = Q theta + v`` for every ``theta``."""
    f = as_vector(f, "f")
    Lp = as_matrix(Lp, "Lp")
    Lq = as_matrix(Lq, "Lq")
    size = f.shape[0]
    if Lp.shape != (size, size) or Lq.shape != (size, size):
        raise DimensionError(f"operators must be {size}x{size}")
    v = Lp @ f
    return np.diag(Lq @ f - v), v


def _theta_system(Q, gamma, eta, lambda_tilde, L1):
    q = np.diag(Q) / np.sqrt(gamma)
    A = np.vstack([np.sqrt(lambda_tilde) * np.diag(q), L1 / np.sqrt(eta)])
    return q, QRLeastSquares(A)


def update_theta_ls(w_star, g, Q, v, gamma, eta: float, lambda_tilde: float, L1=None):
    """Least-squares ``theta`` update for fixed ``w_star`` and Bregman target ``g``.

    ``L1`` defaults to the first-order backward difference of matching size.
    """
    gamma = as_vector(gamma, "gamma")
    if np.any(gamma <= 0) or not eta > 0:
        raise ValueError("need positive gamma and eta")
    if L1 is None:
        size = gamma.shape[0]
        L1 = np.eye(size) - np.eye(size, k=-1)
    _, ls = _theta_system(as_matrix(Q, "Q"), gamma, eta, lambda_tilde, L1)
    rhs = np.concatenate(
        [np.sqrt(lambda_tilde) * (w_star - v / np.sqrt(gamma)), g / np.sqrt(eta)]
    )
    return ls.solve(rhs)


def bregman_solve_theta(theta_prev, f, gamma, ctx: ObjectiveContext, params: BregmanParams):
    """Bregman iteration for the weights, clipped into ``[0, 1]`` at the end.

    The exponent vector is recomputed from the current outer iterate before
    each run of splitting sweeps; the accumulator follows
    ``g <- g - L1 theta``, starting from zero.
    """
    eta = ctx.hyper_params.eta
    lam = params.lambda_tilde
    gamma = as_vector(gamma, "gamma")
    Q, v = build_Q_v(f, ctx.Lp, ctx.Lq)
    q, ls = _theta_system(Q, gamma, eta, lam, ctx.L1)
    v_scaled = v / np.sqrt(gamma)
    sqrt_lam = np.sqrt(lam)
    theta = as_vector(theta_prev, "theta_prev").copy()
    g = np.zeros_like(theta)
    for _ in range(params.n_max):
        p = ctx.p_theta(theta)
        for _ in range(params.n_hat_max):
            w = apply_split_w(q * theta + v_scaled, p, lam)
            rhs = np.concatenate([sqrt_lam * (w - v_scaled), g / np.sqrt(eta)])
            theta = ls.solve(rhs)
        g = g - ctx.L1 @ theta
    return np.clip(theta, 0.0, 1.0)
