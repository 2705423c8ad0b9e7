import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.approx_errors import (best_coeffs_on_support, best_m_term, chebyshev_residual, sigma_hat_m,
                                     sigma_m, sigma_tilde_m)
from greedylab.greedy_engine import greedy_residual
from greedylab.normed_space import indicator, make_lp_norm, make_weighted_tail_norm

import oracles

L1, L2, LINF = make_lp_norm(1), make_lp_norm(2), make_lp_norm("inf")
vec = st.lists(st.floats(-4, 4, allow_nan=False).map(lambda v: round(v, 2)), min_size=1, max_size=6)


def test_best_coeffs_examples():
    r = best_coeffs_on_support([3, 1, 2], [1], L2)
    assert r.coeffs == (3.0,) and r.value == pytest.approx(math.sqrt(5))
    r = best_coeffs_on_support([1, 1.9], [2], L1)
    assert r.coeffs == (1.9,) and r.value == pytest.approx(1.0)
    r = best_coeffs_on_support([3, 1], [1], LINF, method="descent", tol=1e-10)
    assert r.value == pytest.approx(1.0, abs=1e-8)
    assert 2 - 1e-6 <= r.coeffs[0] <= 4 + 1e-6


def test_sigma_examples():
    assert sigma_m([1, 1.9], 1, L1) == pytest.approx(1)
    assert sigma_m([0, 2, 0, 3], 2, L2) == 0
    assert sigma_tilde_m([1, 1.9], 1, L1) == pytest.approx(1)
    assert sigma_hat_m([0.1, 5], 1, L2) == pytest.approx(min(math.hypot(0.1, 5), 5))
    assert sigma_hat_m([0.1, 5], 0, L2) == pytest.approx(math.hypot(0.1, 5))


def test_chebyshev_examples():
    assert chebyshev_residual([3, 1, 2], 1, 1.0, L2) == pytest.approx(math.sqrt(5))
    assert chebyshev_residual([3, 0, 2], 2, 1.0, L1) == 0


def test_descent_agrees_with_closed_form():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(size=5)
        S = sorted(rng.choice(5, size=2, replace=False) + 1)
        for o in (L1, L2):
            a = best_coeffs_on_support(x, S, o, method="closed").value
            b = best_coeffs_on_support(x, S, o, method="descent", tol=1e-10).value
            assert b == pytest.approx(a, abs=1e-7)


@settings(max_examples=80, deadline=None)
@given(vec, st.integers(0, 6), st.sampled_from([1, 2, math.inf]))
def test_sigmas_match_bruteforce(x, m, p):
    m = min(m, len(x))
    o = make_lp_norm(p)
    assert sigma_m(x, m, o) == pytest.approx(oracles.sigma_lp(x, m, p), abs=1e-12)
    assert sigma_tilde_m(x, m, o) == pytest.approx(oracles.sigma_tilde(x, m, p), abs=1e-12)
    assert sigma_hat_m(x, m, o) == pytest.approx(oracles.sigma_hat(x, m, p), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(vec, st.integers(0, 5), st.sampled_from([0.5, 1.0]))
def test_error_chain(x, m, tau):
    m = min(m, len(x))
    o = make_weighted_tail_norm(np.linspace(1.5, 0.5, len(x)))
    s = best_m_term(x, m, o, tol=1e-10).value
    assert s <= sigma_tilde_m(x, m, o) + 1e-7
    assert sigma_hat_m(x, m, o) <= sigma_hat_m(x, max(m - 1, 0), o) + 1e-12
    assert chebyshev_residual(x, m, tau, o, tol=1e-10) <= greedy_residual(x, m, tau, o) + 1e-7


@pytest.mark.parametrize("spec", ["lp:1", "lp:1.5", "lp:2", "lp:inf", "weighted_tail:counterexample=1",
                                  "max:[lp:1,lp:inf]"])
def test_solver_against_grid_search(spec):
    from greedylab.normed_space import parse_norm_spec

    o = parse_norm_spec(spec)
    rng = np.random.default_rng(11)
    for _ in range(4):
        x = np.round(rng.normal(size=4), 2)
        M = float(np.abs(x).max())
        h = 1e-2 * M
        for S in ([2], [1, 3]):
            grid = np.arange(-2 * M, 2 * M + h / 2, h)
            pts = np.array(np.meshgrid(*[grid] * len(S))).reshape(len(S), -1).T
            rows = np.repeat(x[None, :], len(pts), axis=0)
            rows[:, np.asarray(S) - 1] -= pts
            g = float(o.many(rows).min())
            v = best_coeffs_on_support(x, S, o, tol=1e-10, method="descent").value
            # the grid value is an upper bound, off by at most the norm of a half-step perturbation
            slack = o(indicator(S, None, 4) * h / 2)
            assert v <= g + 1e-6
            assert g <= v + slack + 1e-9
