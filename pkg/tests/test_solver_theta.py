import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aarm.objective import ObjectiveContext
from aarm.prior import build_difference_operator, combine_operators
from aarm.problems import ForwardModel
from aarm.solver_f import BregmanParams
from aarm.solver_theta import build_Q_v, bregman_solve_theta, update_theta_ls

from helpers import small_context

PARAMS = BregmanParams()


def ops(size):
    return build_difference_operator(2, size - 1), np.eye(size), build_difference_operator(1, size - 1)


def test_build_Q_v_zero_and_degenerate(rng):
    Lp, Lq, _ = ops(5)
    Q, v = build_Q_v(np.zeros(5), Lp, Lq)
    assert not Q.any() and not v.any()
    f = rng.standard_normal(5)
    Q, v = build_Q_v(f, Lp, Lp)
    assert not Q.any()
    np.testing.assert_array_equal(v, Lp @ f)


def test_affine_identity_100_instances(rng):
    worst = 0.0
    for _ in range(100):
        size = int(rng.integers(3, 40))
        Lp, Lq, _ = ops(size)
        f, theta = rng.standard_normal(size) * 10, rng.uniform(0, 1, size)
        Q, v = build_Q_v(f, Lp, Lq)
        worst = max(worst, np.max(np.abs(combine_operators(Lp, Lq, theta) @ f - (Q @ theta + v))))
    assert worst <= 1e-12


def test_update_theta_penalty_limit(rng):
    w, g = rng.uniform(0, 1, 6), rng.standard_normal(6)
    theta = update_theta_ls(w, g, np.eye(6), np.zeros(6), np.ones(6), eta=1e12, lambda_tilde=10)
    np.testing.assert_allclose(theta, w, atol=1e-8)


def test_update_theta_consistent_system(rng):
    size = 6
    Lp, Lq, L1 = ops(size)
    f, theta_hat, gamma = rng.standard_normal(size), rng.uniform(0, 1, size), rng.uniform(0.5, 2, size)
    Q, v = build_Q_v(f, Lp, Lq)
    w = (Q @ theta_hat + v) / np.sqrt(gamma)
    theta = update_theta_ls(w, L1 @ theta_hat, Q, v, gamma, eta=0.7, lambda_tilde=3.0, L1=L1)
    np.testing.assert_allclose(theta, theta_hat, atol=1e-10)


def test_update_theta_normal_equations(rng):
    size, lam, eta = 3, 4.0, 0.5
    _, _, L1 = ops(size)
    q = rng.standard_normal(size)
    Q, v = np.diag(q), rng.standard_normal(size)
    gamma, w, g = rng.uniform(0.5, 2, size), rng.standard_normal(size), rng.standard_normal(size)
    A = np.diag(q / np.sqrt(gamma))
    lhs = lam * A.T @ A + L1.T @ L1 / eta
    rhs = lam * A.T @ (w - v / np.sqrt(gamma)) + L1.T @ g / eta
    oracle = np.linalg.solve(lhs, rhs)
    np.testing.assert_allclose(update_theta_ls(w, g, Q, v, gamma, eta, lam, L1), oracle, rtol=1e-10)


def _ctx(size, rng):
    Lp, Lq, L1 = ops(size)
    return ObjectiveContext(ForwardModel(np.eye(size), np.eye(size)), np.zeros(size), Lp, Lq, L1)


def test_zero_signal_gives_zero_weights(rng):
    ctx = _ctx(8, rng)
    theta = bregman_solve_theta(rng.uniform(0, 1, 8), np.zeros(8), np.ones(8), ctx, PARAMS)
    np.testing.assert_allclose(theta, 0.0, atol=1e-12)


def test_in_box_optimum_not_clipped(rng):
    # a constant signal is reproduced exactly by the identity, so the
    # unclipped weights are strictly inside the box
    ctx = _ctx(10, rng)
    f = np.ones(10)
    theta = bregman_solve_theta(np.full(10, 0.5), f, np.ones(10), ctx, BregmanParams(n_max=1, n_hat_max=1))
    assert np.all((theta > 0) & (theta < 1))


def test_independent_of_signal_when_operators_equal(rng):
    size = 7
    Lp, _, L1 = ops(size)
    ctx = ObjectiveContext(ForwardModel(np.eye(size), np.eye(size)), np.zeros(size), Lp, Lp, L1)
    theta0, gamma = rng.uniform(0, 1, size), rng.uniform(0.5, 2, size)
    a = bregman_solve_theta(theta0, rng.standard_normal(size), gamma, ctx, PARAMS)
    b = bregman_solve_theta(theta0, 5 * rng.standard_normal(size), gamma, ctx, PARAMS)
    np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_output_in_box(seed):
    r = np.random.default_rng(seed)
    ctx, _ = small_context(r, size=9)
    f = r.standard_normal(9) * 10 ** r.uniform(-2, 2)
    theta = bregman_solve_theta(r.uniform(0, 1, 9), f, r.uniform(0.1, 5, 9), ctx, BregmanParams(5, 5, 10))
    assert np.all((theta >= 0) & (theta <= 1))
