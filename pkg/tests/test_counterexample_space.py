import math

import numpy as np
import pytest

from greedylab import counterexample_space as cs
from greedylab.normed_space import make_weighted_tail_norm, norm_eval

import oracles


@pytest.fixture(scope="module")
def w():
    return cs.build_weights(12)


def test_first_block_matches_reference(w):
    n1, b1 = oracles.first_block()
    assert w.N[0] == n1 == 11
    assert w.b[0] == pytest.approx(b1, rel=1e-14)
    assert w.b[0] == pytest.approx((1 / math.log(2)) / math.fsum(1 / math.sqrt(k) for k in range(1, 12)))


def test_minimality_and_growth(w):
    for j in range(1, w.J + 1):
        assert w.is_feasible(j, w.N[j - 1])
        assert not w.is_feasible(j, w.N[j - 1] - 1)
        if j > 1:
            assert w.N[j - 1] > 10 * w.N[j - 2]
            assert w.b[j - 1] < w.b[j - 2]


def test_sum_t_against_direct_sum():
    for lo, hi in ((1, 11), (12, 5000), (1000, 250_000), (3, 3)):
        want = math.fsum(1 / math.sqrt(k) for k in range(lo, hi + 1))
        assert cs.sum_t(lo, hi) == pytest.approx(want, rel=1e-13)


def test_block_vector_dense_agreement(w):
    for K in (1, 2, 3):
        x = cs.make_block_vector(K, w)
        dense = x.dense()
        o = make_weighted_tail_norm(w.dense_weights(dense.size))
        assert cs.block_norm(x, w) == pytest.approx(norm_eval(o, dense), abs=1e-9)
        tail, l2 = cs.block_seminorms(x, w)
        assert l2 == pytest.approx(np.linalg.norm(dense), rel=1e-12)
    x1 = cs.make_block_vector(1, w).dense()
    assert x1[0] == pytest.approx(1 / math.log(2)) and np.all(x1[1:] == -w.b[0]) and x1.size == 12


def test_l2_norm_bound(w):
    x = cs.make_block_vector(w.J, w)
    sq = sum(l * l + n * t * t for l, t, n in zip(x.leads, x.tails, x.lengths))
    bound = 4 + 3 * sum(1 / (n * n * math.log(n + 1) ** 2) for n in range(1, 10_000))
    assert sq < bound


def test_zero_block_vector(w):
    z = cs.BlockVector((0.0, 0.0), (0.0, 0.0), w.N[:2])
    assert cs.block_norm(z, w) == 0


def test_threshold_drops_small_tails(w):
    k = 2
    q = cs.qg_violation_ratio(k, w, 6)
    x = cs.threshold_blocks(cs.make_block_vector(6, w), q.eps)
    assert all(t == 0 for t in x.tails[k:])


def test_certificate_matches_analytic_sum(w):
    for K in range(3, w.J + 1):
        q = cs.qg_violation_ratio(2, w, K)
        assert q.certificate == pytest.approx(oracles.harmonic_log_sum(2, K), abs=1e-6)
        assert q.thresholded_tail >= q.certificate - 1e-12


def test_uniform_A_sample_and_probe(w):
    r = cs.uniform_A_check(3, w, trials=500, seed=1)
    assert r.max_ratio <= 2 and r.passed
    assert r.exhaustive_sets > 0
    e1 = cs.uniform_A_check(1, w, trials=0, prefix=1, exhaustive_size=1)
    assert e1.max_ratio == pytest.approx(1.0)
    adv = cs.adversarial_uniform_A(w, max_size=40)
    assert adv["max_ratio"] == pytest.approx(max(adv["ratios"]))
    top = np.sort(w.dense_weights(10_000))[::-1][:adv["size"]]
    assert adv["max_ratio"] == pytest.approx(top.sum() / math.sqrt(adv["size"]), rel=1e-12)


def test_weights_at_matches_dense(w):
    dense = w.dense_weights(5000)
    pos = np.array([1, 2, 12, 13, 14, 124, 125, 4999])
    assert np.allclose(cs.weights_at(w, pos), dense[pos - 1], rtol=0, atol=1e-15)
