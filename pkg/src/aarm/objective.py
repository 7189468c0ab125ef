"""The MAP objective and its three block sub-objectives."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, as_matrix, as_vector
from .prior import (
    HyperPriorParams,
    HyperState,
    ThresholdParams,
    combine_operators,
    compute_p_theta,
    compute_threshold,
)
from .problems import ForwardModel

__all__ = [
    "ObjectiveContext",
    "mixed_norm",
    "regularizer_argument",
    "eval_T_f",
    "eval_T_theta",
    "eval_T_gamma",
    "eval_T",
]


@dataclass
class ObjectiveContext:
    """Everything the objective needs besides the iterates themselves."""

    forward: ForwardModel
    data: np.ndarray
    Lp: np.ndarray
    Lq: np.ndarray
    L1: np.ndarray
    hyper_params: HyperPriorParams = field(default_factory=HyperPriorParams)
    threshold: ThresholdParams = field(default_factory=ThresholdParams)

    def __post_init__(self):
        self.data = as_vector(self.data, "data")
        self.Lp = as_matrix(self.Lp, "Lp")
        self.Lq = as_matrix(self.Lq, "Lq")
        self.L1 = as_matrix(self.L1, "L1")
        rows, cols = self.forward.shape
        if rows != self.data.shape[0]:
            raise DimensionError(
                f"forward model has {rows} outputs but data has length {self.data.shape[0]}"
            )
        for name in ("Lp", "Lq", "L1"):
            if getattr(self, name).shape != (cols, cols):
                raise DimensionError(f"{name} must be {cols}x{cols}")

    @property
    def size(self) -> int:
        return self.forward.shape[1]

    def p_theta(self, theta) -> np.ndarray:
        return compute_p_theta(theta, compute_threshold(theta, self.threshold))

    def misfit_sq(self, f) -> float:
        r = self.forward.s * (self.data - self.forward.G @ f)
        return float(r @ r)


def mixed_norm(x, p_theta) -> float:
    """``sum_j |x_j| ** p_j`` for exponents in {1, 2}."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p_theta)
    if x.shape != p.shape:
        raise DimensionError(f"vector has length {x.shape}, exponents {p.shape}")
    ax = np.abs(x)
    return float(np.sum(np.where(p == 1, ax, ax * ax)))


def _check_gamma(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("gamma must be positive")
    return gamma


def regularizer_argument(f, theta, gamma, ctx: ObjectiveContext) -> np.ndarray:
    """``D_gamma^{-1/2} L_theta f``."""
    gamma = _check_gamma(gamma)
    L_theta = combine_operators(ctx.Lp, ctx.Lq, theta)
    return (L_theta @ f) / np.sqrt(gamma)


def eval_T_f(f, hyper: HyperState, ctx: ObjectiveContext) -> float:
    p = hyper.p_theta if hyper.p_theta is not None else ctx.p_theta(hyper.theta)
    x = regularizer_argument(f, hyper.theta, hyper.gamma, ctx)
    return 0.5 * ctx.misfit_sq(f) + 0.5 * mixed_norm(x, p)


def eval_T_theta(theta, f, gamma, ctx: ObjectiveContext) -> float:
    """Weight sub-objective; the exponents are recomputed from ``theta``."""
    theta = np.asarray(theta, dtype=float)
    x = regularizer_argument(f, theta, gamma, ctx)
    d = ctx.L1 @ theta
    return 0.5 * mixed_norm(x, ctx.p_theta(theta)) + (d @ d) / (2.0 * ctx.hyper_params.eta)


def eval_T_gamma(gamma, f, theta, ctx: ObjectiveContext, p_theta=None) -> float:
    hp = ctx.hyper_params
    gamma = _check_gamma(gamma)
    p = ctx.p_theta(theta) if p_theta is None else p_theta
    x = regularizer_argument(f, theta, gamma, ctx)
    return (
        0.5 * mixed_norm(x, p)
        + float(np.sum((gamma / hp.gamma_bar) ** hp.r))
        - hp.log_coefficient * float(np.sum(np.log(gamma)))
    )


def eval_T(f, gamma, theta, ctx: ObjectiveContext, p_theta=None) -> float:
    """Full objective, assembled term by term.

    The sub-objectives share the mixed-norm term, so they are not summed.
    """
    hp = ctx.hyper_params
    gamma = _check_gamma(gamma)
    theta = np.asarray(theta, dtype=float)
    p = ctx.p_theta(theta) if p_theta is None else p_theta
    log_gamma = float(np.sum(np.log(gamma)))
    d = ctx.L1 @ theta
    return (
        0.5 * ctx.misfit_sq(f)
        + 0.5 * mixed_norm(regularizer_argument(f, theta, gamma, ctx), p)
        + 0.5 * log_gamma
        + float(np.sum((gamma / hp.gamma_bar) ** hp.r))
        - (hp.r * hp.beta - 1.0) * log_gamma
        + (d @ d) / (2.0 * hp.eta)
    )
