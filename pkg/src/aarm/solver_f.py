"""Modified Bregman iteration for the signal block.

The outer loop adds the data residual back into the target (Bregman
"add back the residual"); each outer step solves its mixed l1/l2 problem
approximately by alternating between the separable ``w``-update and a
stacked least-squares update of ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import QRLeastSquares
from .objective import ObjectiveContext, mixed_norm
from .prior import HyperState, combine_operators
from .prox import apply_split_w

__all__ = [
    "BregmanParams",
    "FSubproblem",
    "update_f_ls",
    "inner_split_solve",
    "bregman_solve_f",
    "bregman_bound",
]


@dataclass(frozen=True)
class BregmanParams:
    """Outer Bregman steps, inner splitting sweeps and the splitting penalty."""

    n_max: int = 20
    n_hat_max: int = 20
    lambda_tilde: float = 10.0

    def __post_init__(self):
        if self.n_max < 1 or self.n_hat_max < 1:
            raise ValueError("bregman.n_max and bregman.n_hat_max must be at least 1")
        if not self.lambda_tilde > 0:
            raise ValueError("bregman.lambda_tilde must be positive")


class FSubproblem:
    """Frozen pieces of the ``f`` problem for one hyperparameter state.

    Holds ``D_gamma^{-1/2} L_theta`` and the QR factorization of the stacked
    least-squares matrix, both of which stay fixed across the Bregman and
    splitting iterations.
    """

    def __init__(self, ctx: ObjectiveContext, hyper: HyperState, params: BregmanParams):
        self.ctx = ctx
        self.params = params
        self.p = hyper.p_theta if hyper.p_theta is not None else ctx.p_theta(hyper.theta)
        L_theta = combine_operators(ctx.Lp, ctx.Lq, hyper.theta)
        self.DL = L_theta / np.sqrt(hyper.gamma)[:, None]
        self.sqrt_lam = np.sqrt(params.lambda_tilde)
        A = np.vstack([ctx.forward.s[:, None] * ctx.forward.G, self.sqrt_lam * self.DL])
        self.ls = QRLeastSquares(A)

    def update_f(self, w, g) -> np.ndarray:
        rhs = np.concatenate([self.ctx.forward.s * g, self.sqrt_lam * w])
        return self.ls.solve(rhs)

    def update_w(self, f) -> np.ndarray:
        return apply_split_w(self.DL @ f, self.p, self.params.lambda_tilde)

    def split_objective(self, f, w, g) -> float:
        """Penalized objective that one splitting sweep does not increase."""
        r = self.ctx.forward.s * (g - self.ctx.forward.G @ f)
        c = w - self.DL @ f
        return (
            0.5 * float(r @ r)
            + 0.5 * mixed_norm(w, self.p)
            + 0.5 * self.params.lambda_tilde * float(c @ c)
        )

    def regularizer(self, f) -> float:
        """``F(f) = (1/2) ||D_gamma^{-1/2} L_theta f||_{p}^{p}``."""
        return 0.5 * mixed_norm(self.DL @ f, self.p)


def update_f_ls(w_star, g, ctx: ObjectiveContext, hyper: HyperState, params: BregmanParams):
    """Least-squares ``f`` update for a fixed auxiliary ``w_star`` and target ``g``."""
    return FSubproblem(ctx, hyper, params).update_f(w_star, g)


def inner_split_solve(f_init, g, ctx, hyper, params, sub: FSubproblem | None = None, monitor=None):
    """Run ``n_hat_max`` sweeps of ``w``-update followed by ``f``-update.

    ``monitor``, when given, is called with the split objective after every
    sweep.
    """
    sub = sub or FSubproblem(ctx, hyper, params)
    f = np.asarray(f_init, dtype=float)
    for _ in range(params.n_hat_max):
        w = sub.update_w(f)
        f = sub.update_f(w, g)
        if monitor is not None:
            monitor(sub.split_objective(f, w, g))
    return f


def bregman_solve_f(f_prev, ctx: ObjectiveContext, hyper: HyperState, params: BregmanParams):
    """Bregman iteration for the signal block.

    Returns the last iterate and the whitened misfit ``||S(d - G f^m)||``
    after each of the ``n_max`` outer steps.
    """
    sub = FSubproblem(ctx, hyper, params)
    d = ctx.data
    G = ctx.forward.G
    residual_sum = np.zeros_like(d)
    f = np.asarray(f_prev, dtype=float).copy()
    misfits = np.empty(params.n_max)
    for m in range(params.n_max):
        f = inner_split_solve(f, d + residual_sum, ctx, hyper, params, sub=sub)
        residual = d - G @ f
        residual_sum += residual
        misfits[m] = np.linalg.norm(ctx.forward.s * residual)
    return f, misfits


def bregman_bound(f_star, ctx: ObjectiveContext, hyper: HyperState, n_max: int) -> float:
    """Upper bound ``(2/n_max) F(f*) + ||S(G f* - d)||^2`` on the squared
    final misfit of :func:`bregman_solve_f`, for a reference solution ``f*``."""
    p = hyper.p_theta if hyper.p_theta is not None else ctx.p_theta(hyper.theta)
    L_theta = combine_operators(ctx.Lp, ctx.Lq, hyper.theta)
    F = 0.5 * mixed_norm((L_theta @ f_star) / np.sqrt(hyper.gamma), p)
    return 2.0 / n_max * F + ctx.misfit_sq(f_star)
