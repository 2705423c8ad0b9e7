import math

import numpy as np
import pytest

from greedylab import constants_lab as cl
from greedylab.families import FamilyConfig
from greedylab.harness import samplers as sp
from greedylab.families import rng_for
from greedylab.normed_space import make_lp_norm, make_weighted_tail_norm, parse_norm_spec

import oracles

L1, L2, LINF = make_lp_norm(1), make_lp_norm(2), make_lp_norm("inf")
FAM = FamilyConfig(dim=6)


@pytest.mark.parametrize("kind", ["nu", "nu_left", "nu_left_prime"])
def test_nu_order_zero_is_tau(kind):
    for tau in (0.5, 1.0):
        e = cl.estimate(kind, 0, tau, L2, FamilyConfig(dim=4))
        assert e.lower_bound == pytest.approx(tau, abs=1e-12)


@pytest.mark.parametrize("oracle", [L1, L2])
def test_nu_lp_is_one(oracle):
    for m in (1, 2):
        for tau in (0.5, 1.0):
            e = cl.estimate_nu(m, tau, oracle, FAM)
            assert abs(e.lower_bound - 1) <= 1e-9
            assert cl.evaluate_witness("nu", oracle, e.witness) == pytest.approx(e.lower_bound, abs=1e-12)


def test_nu_l2_against_bruteforce():
    for m, tau in ((1, 0.5), (2, 0.75)):
        want = oracles.nu_l2_bruteforce(m, tau, 4)
        got = cl.estimate_nu(m, tau, L2, FamilyConfig(dim=4)).lower_bound
        assert got == pytest.approx(want, abs=1e-12)


def test_left_variants_examples():
    assert cl.estimate_nu_left(1, 1.0, L2, FamilyConfig(dim=4)).lower_bound == pytest.approx(1, abs=1e-12)
    assert cl.estimate_nu_left_prime(1, 0.5, L1, FamilyConfig(dim=4)).lower_bound == pytest.approx(1, abs=1e-12)
    assert cl.estimate_nu_left_prime(0, 0.5, L1, FamilyConfig(dim=4)).lower_bound == pytest.approx(0.5)


def test_nu_left_below_nu_on_matched_family():
    o = make_weighted_tail_norm([1.0, 0.6, 0.9, 0.4, 0.7])
    fam = FamilyConfig(dim=5)
    for m in (1, 2):
        assert cl.estimate_nu_left(m, 0.5, o, fam).lower_bound <= cl.estimate_nu(m, 0.5, o, fam).lower_bound + 1e-12


@pytest.mark.parametrize("kind", ["omega", "omega_left", "omega_left_prime"])
def test_omega_values(kind):
    assert cl.estimate(kind, 0, 0.5, L2, FamilyConfig(dim=4)).lower_bound == pytest.approx(1)
    for tau in (0.5, 1.0):
        e = cl.estimate(kind, 2, tau, L2, FAM)
        assert e.lower_bound == pytest.approx(1 / tau, abs=1e-9)
        assert cl.evaluate_witness(kind, L2, e.witness) == pytest.approx(e.lower_bound, abs=1e-12)


def test_transform_examples():
    w = {"x": [0.0] * 4, "A": [1, 2], "B": [3], "eps": [1, 1], "delta": [-1], "tau": 0.5}
    om = cl.nu_omega_witness_transform(w, 0.5)
    assert om["x"] == [0, 0, -1, 0]
    assert cl.evaluate_witness("omega", L2, om) == pytest.approx(1 / (0.5 * math.sqrt(2)))
    w = {"x": [0.3, 0.0, 0.0], "A": [2], "B": [], "eps": [1], "delta": [], "tau": 1.0}
    om = cl.nu_omega_witness_transform(w, 1.0)
    assert cl.evaluate_witness("nu", L2, w) == pytest.approx(cl.evaluate_witness("omega", L2, om))


def test_reverse_transform_bound():
    rng = rng_for(5, "reverse")
    for o in (L1, L2, LINF):
        for _ in range(100):
            w = sp.nu_instance(rng, 6, 2, 0.5, "nu")
            om = cl.nu_omega_witness_transform(w, 0.5)
            back = cl.omega_nu_witness_transform(om, 0.5, o)
            assert cl.evaluate_witness("nu", o, back) >= 0.5 * cl.evaluate_witness("omega", o, om) - 1e-12


def test_projection_constants():
    assert cl.estimate_k(0, L2, FamilyConfig(dim=4)).lower_bound == 0
    assert cl.estimate_k_c(0, L2, FamilyConfig(dim=4)).lower_bound == pytest.approx(1)
    for o in (L1, L2, LINF):
        assert cl.estimate_k_c(2, o, FamilyConfig(dim=5)).lower_bound == pytest.approx(1, abs=1e-12)
    o = make_weighted_tail_norm([1.0, 1.0, 1.0])
    assert cl.estimate_k_c(1, o, FamilyConfig(dim=3)).lower_bound > 1


def test_greedy_constants():
    fam = FamilyConfig(dim=5, grid_support=2)
    for o in (L1, L2, LINF):
        assert cl.estimate_g_c(2, 1.0, o, fam).lower_bound == pytest.approx(1, abs=1e-12)
    o = make_weighted_tail_norm([1.0, 0.8, 1.2, 0.5, 0.9])
    g = cl.estimate_g(2, 0.5, o, fam)
    gc = cl.estimate_g_c(2, 0.5, o, fam)
    for e, other in ((g, "g_c"), (gc, "g")):
        assert abs(cl.evaluate_witness(other, o, e.witness) - e.lower_bound) <= 1 + 1e-12
    exact = cl.estimate_g_c(2, 0.5, o, fam, exact_order=True)
    assert exact.lower_bound <= gc.lower_bound + 1e-12
    assert len(exact.witness["A"]) == 2


def test_g_c_grows_on_counterexample_prefix():
    o = parse_norm_spec("weighted_tail:counterexample=2")
    fam = FamilyConfig(dim=8, grid_support=2, random_x=50)
    small = cl.estimate_g_c(1, 1.0, o, fam).lower_bound
    big = cl.estimate_g_c(3, 1.0, o, fam).lower_bound
    assert big >= small >= 1


def test_set_constants_and_fundamental():
    fam = FamilyConfig(dim=6)
    for m in (1, 2):
        assert cl.estimate_mu(m, L2, fam).lower_bound == pytest.approx(1, abs=1e-12)
        assert cl.estimate_psi(m, L2, fam).lower_bound == pytest.approx(1, abs=1e-12)
        assert cl.estimate_mu(m, L1, fam).lower_bound == pytest.approx(1, abs=1e-12)
    o = make_weighted_tail_norm([1.0, 0.5, 0.9, 0.3, 0.8, 0.6])
    assert cl.estimate_psi(2, o, fam).lower_bound <= cl.estimate_mu(2, o, fam).lower_bound + 1e-12
    assert cl.fundamental_function(4, L2, FamilyConfig(dim=5)).lower_bound == pytest.approx(2)
    assert cl.fundamental_function(3, L1, FamilyConfig(dim=5)).lower_bound == pytest.approx(3)
    ce = parse_norm_spec("weighted_tail:counterexample=2")
    for k in (1, 2, 3):
        f = cl.fundamental_function(k, ce, FamilyConfig(dim=8)).lower_bound
        assert math.sqrt(k) - 1e-12 <= f <= 2 * math.sqrt(k)


def test_analytic_table():
    assert cl.analytic_constant("nu", 0, 0.5, L2) == 0.5
    assert cl.analytic_constant("omega", 3, 0.25, L1) == 4.0
    assert cl.analytic_constant("k", 0, None, L1) == 0
    assert cl.analytic_constant("nu", 2, 0.5, make_weighted_tail_norm([1, 1])) is None


def test_deterministic_given_seed():
    a = cl.estimate_nu(2, 0.5, LINF, FamilyConfig(dim=6, seed=4)).to_json()
    b = cl.estimate_nu(2, 0.5, LINF, FamilyConfig(dim=6, seed=4)).to_json()
    assert a == b


def test_nu_estimates_on_counterexample_prefix_stay_below_six():
    o = parse_norm_spec("weighted_tail:counterexample=2")
    fam = FamilyConfig(dim=6, random_x=100)
    for m in (1, 2, 3):
        for tau in (0.25, 0.5, 1.0):
            assert cl.estimate_nu(m, tau, o, fam).lower_bound <= 6
