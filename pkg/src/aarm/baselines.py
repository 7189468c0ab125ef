"""Reference regularizers: Tikhonov with a first-difference penalty and
total variation."""

from __future__ import annotations

import numpy as np

from .linalg import QRLeastSquares
from .prior import build_difference_operator
from .problems import ForwardModel
from .prox import apply_split_w
from .solver_f import BregmanParams

__all__ = ["tikhonov_objective", "tv_objective", "solve_tikhonov", "solve_tv"]


def _first_difference(forward: ForwardModel) -> np.ndarray:
    return build_difference_operator(1, forward.shape[1] - 1)


def tikhonov_objective(f, data, forward: ForwardModel, lambda_tik: float) -> float:
    r = data - forward.G @ f
    d = _first_difference(forward) @ f
    return float(r @ r + lambda_tik * (d @ d))


def tv_objective(f, data, forward: ForwardModel, lambda_tv: float) -> float:
    r = data - forward.G @ f
    return float(r @ r + lambda_tv * np.sum(np.abs(_first_difference(forward) @ f)))


def solve_tikhonov(data, forward: ForwardModel, lambda_tik: float) -> np.ndarray:
    """Exact minimizer of ``||d - G f||^2 + lambda ||L1 f||^2`` (unwhitened)."""
    if not lambda_tik > 0:
        raise ValueError(f"lambda_tik must be positive, got {lambda_tik}")
    L1 = _first_difference(forward)
    A = np.vstack([forward.G, np.sqrt(lambda_tik) * L1])
    rhs = np.concatenate([np.asarray(data, dtype=float), np.zeros(L1.shape[0])])
    return QRLeastSquares(A).solve(rhs)


def solve_tv(data, forward: ForwardModel, lambda_tv: float, bregman: BregmanParams,
             monitor=None) -> np.ndarray:
    """Split Bregman solve of ``||d - G f||^2 + lambda ||L1 f||_1``.

    Works on the equivalent halved problem ``(1/2)||d - G f||^2 +
    (lambda/2)||w||_1`` subject to ``w = L1 f``: each inner sweep is a
    stacked least-squares ``f`` update followed by soft thresholding at
    ``lambda / (2 lambda_tilde)``; the Bregman variable on the constraint is
    updated after every ``n_hat_max`` sweeps. ``monitor`` receives the TV
    objective after each sweep.
    """
    if not lambda_tv > 0:
        raise ValueError(f"lambda_tv must be positive, got {lambda_tv}")
    data = np.asarray(data, dtype=float)
    lam = bregman.lambda_tilde
    L1 = _first_difference(forward)
    size = L1.shape[0]
    ls = QRLeastSquares(np.vstack([forward.G, np.sqrt(lam) * L1]))
    ones = np.ones(size, dtype=int)
    f = np.zeros(size)
    w = np.zeros(size)
    b = np.zeros(size)
    for _ in range(bregman.n_max):
        for _ in range(bregman.n_hat_max):
            f = ls.solve(np.concatenate([data, np.sqrt(lam) * (w - b)]))
            w = apply_split_w(L1 @ f + b, ones, lam, l1_weight=0.5 * lambda_tv)
            if monitor is not None:
                monitor(tv_objective(f, data, forward, lambda_tv))
        b = b + L1 @ f - w
    return f
