import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.normed_space import (CoeffVector, DomainError, indicator, make_lp_norm, make_weighted_tail_norm,
                                    norm_eval, parse_norm_spec, precedes, save_weights_csv, sup_norm)

import oracles

vec = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=7)


def test_lp_examples():
    assert norm_eval(make_lp_norm(2), [3, 4]) == pytest.approx(5)
    assert norm_eval(make_lp_norm(1), [1, 1.9]) == pytest.approx(2.9)
    assert norm_eval(make_lp_norm("inf"), [1, 1.9]) == pytest.approx(1.9)
    assert norm_eval(make_lp_norm(2), [1, 0, 0]) == 1.0
    assert norm_eval(make_lp_norm(1.5), [0, 0]) == 0.0


def test_weighted_tail_examples():
    assert norm_eval(make_weighted_tail_norm([1, 1]), [1, -1]) == pytest.approx(math.sqrt(2))
    assert norm_eval(make_weighted_tail_norm([1, 1, 1]), [1, -1, 0]) == pytest.approx(math.sqrt(2))
    w = [0.3, 2.5, 0.7]
    for n in range(3):
        e = np.zeros(3)
        e[n] = 1
        assert norm_eval(make_weighted_tail_norm(w), e) == pytest.approx(max(w[n], 1))


def test_counterexample_pair_bound():
    o = parse_norm_spec("weighted_tail:counterexample=2")
    assert norm_eval(o, indicator([1, 2], None, 124)) <= 2 * math.sqrt(2)


def test_sup_norm():
    assert sup_norm([3, 1, 2]) == 3
    assert sup_norm([0, 0]) == 0
    assert sup_norm([-5, 4]) == 5


def test_bad_inputs():
    with pytest.raises(DomainError):
        CoeffVector([])
    with pytest.raises(DomainError):
        CoeffVector([1, math.nan])
    with pytest.raises(DomainError):
        make_lp_norm(0.5)
    with pytest.raises(DomainError):
        parse_norm_spec("nonsense:3")


def test_precedes():
    assert precedes([1, 2], [3])
    assert not precedes([1, 3], [2])
    assert precedes([], [1])


def test_parse_specs(tmp_path):
    f = tmp_path / "w.csv"
    save_weights_csv(f, [1.0, 0.5, 0.25])
    o = parse_norm_spec(f"weighted_tail:file={f}")
    assert norm_eval(o, [1, 1, 1]) == pytest.approx(max(1.75, math.sqrt(3)))
    m = parse_norm_spec("max:[lp:1,lp:inf]")
    assert norm_eval(m, [1, -2]) == pytest.approx(3)


@settings(max_examples=60, deadline=None)
@given(vec, st.sampled_from([1, 2, 3, math.inf]))
def test_lp_matches_reference(x, p):
    assert norm_eval(make_lp_norm(p), x) == pytest.approx(oracles.lp(x, p), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(vec, vec)
def test_norm_axioms(x, y):
    n = min(len(x), len(y))
    x, y = np.array(x[:n]), np.array(y[:n])
    for o in (make_lp_norm(1), make_lp_norm(2), make_weighted_tail_norm(np.linspace(1, 0.2, n))):
        assert norm_eval(o, x + y) <= norm_eval(o, x) + norm_eval(o, y) + 1e-9
        assert norm_eval(o, -2.5 * x) == pytest.approx(2.5 * norm_eval(o, x), rel=1e-12, abs=1e-12)
