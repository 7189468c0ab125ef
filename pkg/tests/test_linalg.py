import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aarm.linalg import (
    DimensionError,
    QRLeastSquares,
    RankDeficientError,
    as_matrix,
    as_vector,
    matvec,
    solve_least_squares,
)


def test_matvec_examples():
    np.testing.assert_array_equal(matvec(np.eye(3), [1, 2, 3]), [1, 2, 3])
    np.testing.assert_array_equal(matvec(np.zeros((2, 3)), [4, 5, 6]), [0, 0])
    np.testing.assert_array_equal(matvec([[1, 1], [1, -1]], [2, 3]), [5, -1])


def test_matvec_shape_mismatch():
    with pytest.raises(DimensionError):
        matvec(np.eye(3), [1, 2])


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        as_vector([1.0, np.nan])
    with pytest.raises(ValueError):
        as_matrix([[np.inf]])
    with pytest.raises(DimensionError):
        as_vector(np.eye(2))


def test_least_squares_examples():
    b = np.array([1.5, -2.0, 7.0])
    np.testing.assert_allclose(solve_least_squares(np.eye(3), b), b)
    np.testing.assert_allclose(solve_least_squares([[1.0], [1.0]], [1.0, 3.0]), [2.0])
    x = solve_least_squares([[1, 0], [0, 1], [1, 1]], [1, 1, 2])
    np.testing.assert_allclose(x, [1.0, 1.0], atol=1e-14)


def test_rank_deficient():
    with pytest.raises(RankDeficientError) as info:
        QRLeastSquares([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    assert info.value.pivot <= info.value.tol


def test_wide_matrix_rejected():
    with pytest.raises(DimensionError):
        QRLeastSquares(np.ones((2, 3)))


def test_factorization_reuse_matches_fresh_solve(rng):
    A = rng.standard_normal((12, 5))
    ls = QRLeastSquares(A)
    for _ in range(3):
        b = rng.standard_normal(12)
        np.testing.assert_allclose(ls.solve(b), np.linalg.lstsq(A, b, rcond=None)[0], rtol=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 12), extra=st.integers(0, 8))
def test_consistent_systems_recovered(seed, m, extra):
    r = np.random.default_rng(seed)
    A = r.standard_normal((m + extra, m)) + 2.0 * np.eye(m + extra, m)
    if np.linalg.cond(A) > 1e6:
        return
    x_hat = r.uniform(-5, 5, m)
    x = solve_least_squares(A, A @ x_hat)
    assert np.max(np.abs(x - x_hat)) <= 1e-8 * (1 + np.max(np.abs(x_hat)))


def test_minimality(rng):
    for _ in range(100):
        m, n = rng.integers(3, 9), rng.integers(1, 4)
        A = rng.standard_normal((m, n))
        b = rng.standard_normal(m)
        x = solve_least_squares(A, b)
        base = np.linalg.norm(A @ x - b)
        for delta in rng.standard_normal((100, n)):
            assert base <= np.linalg.norm(A @ (x + delta) - b) + 1e-10
