import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.greedy_engine import (greedy_residual, is_weak_greedy_set, partial_sum, project, threshold,
                                     truncate, weak_greedy_sets, worst_greedy_set)
from greedylab.normed_space import DomainError, make_lp_norm

import oracles

# small integer lattice makes ties frequent
tied = st.lists(st.integers(-3, 3).map(float), min_size=1, max_size=6)
taus = st.sampled_from([0.25, 0.5, 0.75, 1.0])


def test_membership_examples():
    x = [3, 1, 2]
    assert is_weak_greedy_set(x, [1], 1.0)
    assert not is_weak_greedy_set(x, [2], 0.5)
    assert is_weak_greedy_set(x, [3], 0.5)


def test_family_examples():
    assert weak_greedy_sets([3, 1, 2], 1, 1.0).sets == ((1,),)
    assert weak_greedy_sets([3, 1, 2], 1, 0.5).sets == ((1,), (3,))


def test_projection_and_partial_sums():
    assert project([3, 1, 2], [1, 3]).values.tolist() == [3, 0, 2]
    assert project([3, 1, 2], [4]).values.tolist() == [0, 0, 0]
    assert partial_sum([3, 1, 2], 2).values.tolist() == [3, 1, 0]
    assert partial_sum([3, 1, 2], 0).values.tolist() == [0, 0, 0]
    assert partial_sum([3, 1, 2], 7).values.tolist() == [3, 1, 2]


def test_greedy_residual_examples():
    assert greedy_residual([1, 1.9], 1, 0.5, make_lp_norm(1)) == pytest.approx(1.9)
    assert greedy_residual([3, 1, 2], 1, 1.0, make_lp_norm(2)) == pytest.approx(math.sqrt(5))
    val, S, trunc = worst_greedy_set([1, 1.9], 1, 0.5, make_lp_norm(1))
    assert S == (1,) and not trunc


def test_truncate_and_threshold():
    assert truncate([2, 0.5, -3], 1).values.tolist() == [1, 0.5, -1]
    assert truncate([-2], 1).values.tolist() == [-1]
    assert truncate([1, -2], 5).values.tolist() == [1, -2]
    assert threshold([2, 1, 0.5], 1).values.tolist() == [2, 0, 0]
    assert threshold([2, 1], 0.1).values.tolist() == [2, 1]
    assert threshold([2, 1], 2).values.tolist() == [0, 0]


def test_domain_errors():
    with pytest.raises(DomainError):
        weak_greedy_sets([1, 2], 1, 0.0)
    with pytest.raises(DomainError):
        weak_greedy_sets([1, 2], 3, 1.0)
    with pytest.raises(DomainError):
        truncate([1], 0)


@settings(max_examples=150, deadline=None)
@given(tied, st.integers(0, 6), taus)
def test_family_matches_bruteforce(x, m, tau):
    m = min(m, len(x))
    got = set(weak_greedy_sets(x, m, tau).sets)
    want = {tuple(i + 1 for i in S) for S in oracles.weak_greedy_sets(x, m, tau)}
    assert got == want


@settings(max_examples=100, deadline=None)
@given(tied, st.integers(0, 6), taus, st.sampled_from([1, 2, math.inf]))
def test_gamma_matches_bruteforce(x, m, tau, p):
    m = min(m, len(x))
    assert greedy_residual(x, m, tau, make_lp_norm(p)) == pytest.approx(oracles.gamma(x, m, tau, p), abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(tied, st.integers(0, 6), st.sampled_from([0.25, 0.5, 1.0]))
def test_families_nest_in_tau(x, m, tau):
    m = min(m, len(x))
    assert set(weak_greedy_sets(x, m, 1.0).sets) <= set(weak_greedy_sets(x, m, tau).sets)
