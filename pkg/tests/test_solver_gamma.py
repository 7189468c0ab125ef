import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aarm.prior import HyperPriorParams
from aarm.solver_gamma import (
    GAMMA_MIN,
    _solve_roots,
    closed_form_gamma,
    solve_gamma_component,
    stationarity_residual,
    update_gamma,
)

DEFAULT = HyperPriorParams()


def component_objective(g, F, p, hp):
    """Per-component variance objective (T_gamma restricted to one index)."""
    return (
        0.5 * abs(F / np.sqrt(g)) ** p
        + (g / hp.gamma_bar) ** hp.r
        - (hp.r * hp.beta - 1.5) * np.log(g)
    )


def test_spot_values():
    assert solve_gamma_component(0.0, 1, DEFAULT) == pytest.approx(0.5, abs=1e-12)
    assert solve_gamma_component(0.0, 2, DEFAULT) == pytest.approx(0.5, abs=1e-12)
    assert solve_gamma_component(1.0, 2, DEFAULT) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(update_gamma(np.zeros(4), np.array([1, 2, 1, 2]), DEFAULT), 0.5)


def test_closed_form_formula():
    F = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(closed_form_gamma(F, DEFAULT), 0.25 + np.sqrt(1 / 16 + F**2 / 2), rtol=1e-14)


def test_iterative_path_matches_closed_form():
    F = np.r_[0.0, np.geomspace(1e-6, 1e4, 40)]
    for hp in (DEFAULT, HyperPriorParams(beta=3.0, gamma_bar=0.3)):
        root = _solve_roots(F, np.full(F.size, 2), hp)
        np.testing.assert_allclose(root, closed_form_gamma(F, hp), rtol=1e-10)


@pytest.mark.parametrize(
    "hp",
    [DEFAULT, HyperPriorParams(r=2.0, beta=1.0, gamma_bar=0.5), HyperPriorParams(r=0.7, beta=4.0, gamma_bar=3.0)],
)
def test_residual_and_curvature(rng, hp):
    F = rng.standard_normal(300) * 10 ** rng.uniform(-4, 3, 300)
    p = rng.integers(1, 3, 300)
    gamma = update_gamma(F, p, hp)
    res = stationarity_residual(gamma, F, p, hp)
    assert np.all(np.abs(res) <= 1e-10 * (1 + np.abs(F)))
    for g, Fl, pl in zip(gamma[:40], F[:40], p[:40]):
        h = 1e-4 * g
        curv = (component_objective(g + h, Fl, pl, hp) - 2 * component_objective(g, Fl, pl, hp)
                + component_objective(g - h, Fl, pl, hp))
        assert curv > 0


def test_mixed_exponents_match_scalar_oracle(rng):
    hp = HyperPriorParams(r=1.5, beta=2.0)
    F = rng.standard_normal(20)
    p = rng.integers(1, 3, 20)
    vec = update_gamma(F, p, hp)
    scalar = [solve_gamma_component(Fl, int(pl), hp) for Fl, pl in zip(F, p)]
    np.testing.assert_allclose(vec, scalar, rtol=1e-14)


def test_root_is_component_minimizer():
    from aarm.prox import brute_force_1d_argmin

    for F, p in ((0.7, 1), (2.0, 1), (0.3, 2)):
        g = solve_gamma_component(F, p, DEFAULT)
        oracle = brute_force_1d_argmin(lambda x: component_objective(x, F, p, DEFAULT), 1e-3, 10)
        assert g == pytest.approx(oracle, rel=1e-6)


def test_floor_and_validation():
    assert np.all(update_gamma(np.zeros(3), np.array([2, 2, 2]), DEFAULT) >= GAMMA_MIN)
    with pytest.raises(ValueError):
        solve_gamma_component(1.0, 3, DEFAULT)
    with pytest.raises(ValueError):
        update_gamma(np.zeros(2), np.array([2, 2]), HyperPriorParams(beta=1.0))


@settings(max_examples=100, deadline=None)
@given(a=st.floats(0, 1e3), b=st.floats(0, 1e3), p=st.sampled_from([1, 2]))
def test_monotone_in_abs_F(a, b, p):
    lo, hi = sorted((a, b))
    g = update_gamma(np.array([lo, -hi]), np.array([p, p]), DEFAULT)
    assert g[0] <= g[1] * (1 + 1e-12)
