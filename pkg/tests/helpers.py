"""Small random instances shared by the tests."""

import numpy as np

from aarm.outer import SolverConfig, build_context
from aarm.prior import HyperState, ThresholdParams
from aarm.problems import ForwardModel


def small_context(rng, size=6, rows=None, noise=0.0):
    """Random well-posed instance with identity whitening."""
    rows = size if rows is None else rows
    G = rng.standard_normal((rows, size)) + 3.0 * np.eye(rows, size)
    f_true = rng.standard_normal(size)
    data = G @ f_true + noise * rng.standard_normal(rows)
    forward = ForwardModel(G, np.eye(rows))
    return build_context(data, forward, SolverConfig()), f_true


def random_hyper(rng, size, threshold=None):
    theta = rng.uniform(0, 1, size)
    gamma = rng.uniform(0.5, 2.0, size)
    threshold = ThresholdParams() if threshold is None else threshold
    return HyperState.from_theta(theta, gamma, threshold)
