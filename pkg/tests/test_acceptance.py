"""Acceptance criteria, one test each; every test prints a single pass/fail line."""

import math
import time

import numpy as np
import pytest

from greedylab import constants_lab as cl
from greedylab import counterexample_space as cs
from greedylab import lebesgue_lab as ll
from greedylab.approx_errors import sigma_m
from greedylab.families import FamilyConfig, rng_for
from greedylab.greedy_engine import greedy_residual
from greedylab.harness import POINTWISE, VerifyConfig, any_failed
from greedylab.harness import checks
from greedylab.harness import samplers as sp
from greedylab.harness.report import dumps
from greedylab.harness.runner import make_ctx, run_document
from greedylab.normed_space import make_lp_norm, parse_norm_spec

BUILTIN_NORMS = ("lp:1", "lp:1.5", "lp:2", "lp:inf", "weighted_tail:counterexample=2", "max:[lp:1,lp:inf]")


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_exact_constants_l2(report):
    t0 = time.perf_counter()
    o = make_lp_norm(2)
    fam = FamilyConfig(dim=6)
    worst = 0.0
    for m in (1, 2):
        worst = max(worst, abs(cl.estimate_mu(m, o, fam).lower_bound - 1),
                    abs(cl.estimate_psi(m, o, fam).lower_bound - 1),
                    abs(cl.estimate_k_c(m, o, fam).lower_bound - 1))
        for tau in (0.5, 1.0):
            worst = max(worst, abs(cl.estimate_nu(m, tau, o, fam).lower_bound - 1),
                        abs(cl.estimate_g_c(m, tau, o, fam).lower_bound - 1))
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-9 and dt < 30, f"max deviation from 1 is {worst:.2e}, {dt:.1f}s")


def test_criterion_2_weak_lebesgue_l1(report):
    t0 = time.perf_counter()
    o = make_lp_norm(1)
    est = ll.estimate_L(1, 0.5, o, FamilyConfig(dim=6)).lower_bound
    rng = rng_for(0, "criterion-2")
    worst = 0.0
    for x in sp.sample_x(6, 10_000, rng):
        s = sigma_m(x, 1, o)
        if s > 0:
            worst = max(worst, greedy_residual(x, 1, 0.5, o) / s)
    dt = time.perf_counter() - t0
    ok = est >= 1.99 and worst <= 2 + 1e-9 and dt < 60
    report(2, ok, f"estimate_L(1, 0.5) = {est:.6f}, max sampled ratio {worst:.6f} over 1e4 trials, {dt:.1f}s")


def test_criterion_3_witness_transforms(report):
    worst = 0.0
    rng = rng_for(0, "criterion-3")
    for spec in BUILTIN_NORMS:
        o = parse_norm_spec(spec)
        for nu_kind, om_kind in (("nu", "omega"), ("nu_left", "omega_left"), ("nu_left_prime", "omega_left_prime")):
            for i in range(1000):
                tau = float(rng.choice([0.25, 0.5, 0.75, 1.0]))
                w = sp.nu_instance(rng, 6, int(rng.integers(1, 4)), tau, nu_kind)
                om = cl.nu_omega_witness_transform(w, tau)
                lhs = cl.evaluate_witness(om_kind, o, om)
                rhs = cl.evaluate_witness(nu_kind, o, w, tau) / tau
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    report(3, worst <= 1e-12, f"max relative gap {worst:.2e} over 3x1000 witnesses on {len(BUILTIN_NORMS)} norms")


def test_criterion_4_hat_equality_order_one(report):
    worst = 0.0
    for spec in ("lp:1", "lp:2"):
        o = parse_norm_spec(spec)
        for tau in (0.5, 1.0):
            fam = FamilyConfig(dim=5)
            nup = cl.estimate_nu_left_prime(1, tau, o, fam)
            w = ll.y_witness_left_prime(nup.witness, tau, o)
            Lh = ll.estimate_L_hat_re(1, tau, o, fam, [w] if w["m"] == 1 else [])
            worst = max(worst, abs(Lh.lower_bound - nup.lower_bound / tau))
    report(4, worst <= 1e-3, f"max |hat estimate - nu'/tau| = {worst:.2e}")


def test_criterion_5_counterexample_construction(report):
    w = cs.build_weights(40)
    minimal = all(w.is_feasible(j, w.N[j - 1]) and not w.is_feasible(j, w.N[j - 1] - 1)
                  for j in range(1, w.J + 1))
    ua = cs.uniform_A_check(3, w, trials=10_000, seed=0)
    adv = cs.adversarial_uniform_A(w)
    ok = w.N[0] == 11 and minimal and ua.max_ratio <= 2
    report(5, ok, f"N_1 = {w.N[0]}, minimal for all {w.J} blocks = {minimal}, sampled max ratio {ua.max_ratio:.6f}"
                  f" (top-weight probe, outside the criterion: {adv['max_ratio']:.4f} at |A| = {adv['size']})")


def test_criterion_6_non_quasi_greedy_trend(report):
    J_max = 40
    w = cs.build_weights(J_max)
    qs = [cs.qg_violation_ratio(2, w, K) for K in range(3, J_max + 1)]
    r = np.array([q.ratio for q in qs])
    increasing = bool(np.all(np.diff(r) > 0))
    formula = max(abs(q.certificate - q.analytic_sum) for q in qs)
    ok = increasing and formula <= 1e-6
    report(6, ok, f"ratio strictly increasing = {increasing} (r_3 = {r[0]:.5f}, r_{J_max} = {r[-1]:.5f}),"
                  f" max |tail certificate - analytic sum| = {formula:.1e}")


def test_criterion_7_section6_certificates(report):
    t0 = time.perf_counter()
    cfg = VerifyConfig(dim=6, m_max=3)
    bad, total = [], 0
    for spec in ("lp:1", "lp:2", "lp:inf"):
        ctx = make_ctx(cfg, spec)
        for tau in (0.25, 0.5, 1.0):
            for cid in ("lemma-pl2", "lemma-gu-1", "lemma-gu-2"):
                rep = checks.run_pointwise(POINTWISE[cid], ctx, 1, tau, 10_000)
                total += rep.instances
                bad += [(cid, spec, tau)] * rep.violation_count
            for cid in ("thm-pst2", "thm-pst4"):
                for m in (1, 2, 3):
                    rep = checks.run_pointwise(POINTWISE[cid], ctx, m, tau, 3334)
                    total += rep.instances
                    bad += [(cid, spec, tau)] * rep.violation_count
    dt = time.perf_counter() - t0
    report(7, not bad, f"{total} instances, {len(bad)} violations, {dt:.1f}s")


def test_criterion_8_full_verify(report):
    cfg = VerifyConfig()
    t0 = time.perf_counter()
    doc1, reps = run_document(cfg)
    dt = time.perf_counter() - t0
    doc2, _ = run_document(cfg)
    identical = dumps(doc1) == dumps(doc2)
    fails = sum(r.status == "fail" for r in reps)
    ok = not any_failed(reps) and identical and dt < 300
    report(8, ok, f"{len(reps)} checks, {fails} failed, {dt:.0f}s, byte-identical rerun = {identical}")
