"""Spatially adaptive prior: AR difference operators, the exponent selector
and the hyperprior log-densities."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, as_matrix, as_vector

__all__ = [
    "GammaBelief",
    "ThetaBelief",
    "HyperPriorParams",
    "ThresholdParams",
    "HyperState",
    "build_difference_operator",
    "combine_operators",
    "compute_threshold",
    "compute_p_theta",
    "log_hyperprior_gamma",
    "log_hyperprior_theta",
]


class GammaBelief(enum.Enum):
    GEN_GAMMA = "gengamma"
    HALF_GAUSSIAN = "halfgaussian"


class ThetaBelief(enum.Enum):
    GAUSSIAN_SMOOTH = "gaussian"
    LAPLACE_SMOOTH = "laplace"


@dataclass(frozen=True)
class HyperPriorParams:
    """Parameters of the hyperpriors on the variances and the weights.

    ``r``, ``beta`` and ``gamma_bar`` parametrize the generalized gamma
    prior on the variances, ``eta`` the smoothness prior on the weights
    (and the half-Gaussian variance prior). Only positivity is checked on
    construction; :meth:`check_solvable` adds the ``r * beta > 3/2``
    condition that the variance update needs.
    """

    r: float = 1.0
    beta: float = 2.0
    gamma_bar: float = 1.0
    eta: float = 1.0
    belief_gamma: GammaBelief = GammaBelief.GEN_GAMMA
    belief_theta: ThetaBelief = ThetaBelief.GAUSSIAN_SMOOTH

    def __post_init__(self):
        for name in ("r", "beta", "gamma_bar", "eta"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"hyper.{name} must be positive, got {value}")

    @property
    def log_coefficient(self) -> float:
        """Coefficient ``r*beta - 3/2`` of ``-sum(log gamma)`` in the objective."""
        return self.r * self.beta - 1.5

    def check_solvable(self) -> None:
        if not self.r * self.beta > 1.5:
            raise ValueError(
                f"hyper.r * hyper.beta must exceed 3/2, got "
                f"{self.r} * {self.beta} = {self.r * self.beta}"
            )


@dataclass(frozen=True)
class ThresholdParams:
    """Constants of the switching threshold rule (``0 < m < M``, ``1/2 < rho < 1``)."""

    M: float = 2.0
    m: float = 0.5
    rho: float = 0.9

    def __post_init__(self):
        if not (0 < self.m < self.M < np.inf):
            raise ValueError(f"threshold needs 0 < m < M < inf, got m={self.m}, M={self.M}")
        if not (0.5 < self.rho < 1):
            raise ValueError(f"threshold.rho must lie in (1/2, 1), got {self.rho}")


@dataclass
class HyperState:
    """Current hyperparameters: weights ``theta``, variances ``gamma`` and
    the exponent vector ``p_theta`` derived from ``theta``."""

    theta: np.ndarray
    gamma: np.ndarray
    p_theta: np.ndarray = field(default=None)

    def __post_init__(self):
        self.theta = as_vector(self.theta, "theta").copy()
        self.gamma = as_vector(self.gamma, "gamma").copy()
        if self.theta.shape != self.gamma.shape:
            raise DimensionError("theta and gamma must have the same length")
        if np.any(self.theta < 0) or np.any(self.theta > 1):
            raise ValueError("theta must lie in [0, 1]")
        if np.any(self.gamma <= 0):
            raise ValueError("gamma must be positive")
        if self.p_theta is not None:
            p = np.asarray(self.p_theta, dtype=int).copy()
            if p.shape != self.theta.shape or not np.all((p == 1) | (p == 2)):
                raise ValueError("p_theta must be a vector of 1s and 2s matching theta")
            self.p_theta = p

    @classmethod
    def from_theta(cls, theta, gamma, threshold: ThresholdParams) -> "HyperState":
        theta = np.asarray(theta, dtype=float)
        p = compute_p_theta(theta, compute_threshold(theta, threshold))
        return cls(theta, gamma, p)

    def copy(self) -> "HyperState":
        return HyperState(self.theta, self.gamma, self.p_theta)


def build_difference_operator(order: int, n: int) -> np.ndarray:
    """Lower-triangular AR difference operator of size ``(n+1, n+1)``.

    Order 0 is the identity, order 1 the backward difference and order 2 the
    second backward difference. Values before the first sample are taken as
    zero, so the leading rows are simply truncated.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"unsupported difference order {order!r}; expected 0, 1 or 2")
    if n < order:
        raise ValueError(f"need n >= order, got n={n}, order={order}")
    coeffs = {0: (1.0,), 1: (1.0, -1.0), 2: (1.0, -2.0, 1.0)}[order]
    size = n + 1
    L = np.zeros((size, size))
    for k, c in enumerate(coeffs):
        L += c * np.eye(size, k=-k)
    return L


def combine_operators(Lp, Lq, theta) -> np.ndarray:
    """Row-wise convex combination ``(1 - theta_j) Lp[j] + theta_j Lq[j]``."""
    Lp = as_matrix(Lp, "Lp")
    Lq = as_matrix(Lq, "Lq")
    theta = as_vector(theta, "theta")
    size = theta.shape[0]
    if Lp.shape != (size, size) or Lq.shape != (size, size):
        raise DimensionError(
            f"operators must be {size}x{size}, got {Lp.shape} and {Lq.shape}"
        )
    t = theta[:, None]
    return (1.0 - t) * Lp + t * Lq


def compute_threshold(theta, params: ThresholdParams) -> float:
    theta = np.asarray(theta, dtype=float)
    if theta.size < 2:
        raise ValueError("threshold needs at least two weights")
    jumps = np.abs(np.diff(theta))
    mean = jumps.mean()
    return float(max(min(params.M * mean, params.rho * jumps.max()), params.m * mean))


def compute_p_theta(theta, Ts: float) -> np.ndarray:
    """Exponent selector: 1 where the weight jumps by more than ``Ts``
    (with a virtual zero weight before the first sample), else 2."""
    if Ts < 0:
        raise ValueError(f"threshold must be non-negative, got {Ts}")
    theta = np.asarray(theta, dtype=float)
    jumps = np.abs(np.diff(theta, prepend=0.0))
    return np.where(jumps > Ts, 1, 2)


def log_hyperprior_gamma(gamma, params: HyperPriorParams) -> float:
    """Unnormalized log-density of the variance hyperprior."""
    gamma = as_vector(gamma, "gamma")
    if params.belief_gamma is GammaBelief.GEN_GAMMA:
        if np.any(gamma <= 0):
            raise ValueError("generalized gamma prior needs positive gamma")
        return float(
            -np.sum((gamma / params.gamma_bar) ** params.r)
            + (params.r * params.beta - 1.0) * np.sum(np.log(gamma))
        )
    if np.any(gamma < 0):
        return -np.inf
    return float(-np.sum(gamma**2) / (2.0 * params.eta))


def log_hyperprior_theta(theta, L1, params: HyperPriorParams) -> float:
    """Unnormalized log-density of the weight hyperprior; ``-inf`` outside
    the unit hypercube."""
    theta = as_vector(theta, "theta")
    if np.any(theta < 0) or np.any(theta > 1):
        return -np.inf
    d = as_matrix(L1, "L1") @ theta
    if params.belief_theta is ThetaBelief.GAUSSIAN_SMOOTH:
        return float(-(d @ d) / (2.0 * params.eta))
    return float(-np.sum(np.abs(d)) / (2.0 * params.eta))
