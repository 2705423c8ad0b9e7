"""Pointwise certificate checks and estimate-level checks, grouped into suites.

A pointwise check draws seeded instances, evaluates both sides of one
inequality per instance and records every violation with the instance, so a
failure can be replayed in isolation.  Pointwise checks whose bounding side
needs structural constants run only when the oracle supplies them exactly
(or the run overrides them); otherwise they are reported as skipped.

Estimate-level checks compare certified lower bounds, and only in the
direction where a witness construction carries every candidate of one
family into the other.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import constants_lab as cl
from .. import lebesgue_lab as ll
from ..approx_errors import best_m_term, sigma_hat_m, sigma_tilde_m
from ..families import FamilyConfig, rng_for
from ..greedy_engine import iter_weak_greedy_sets, worst_greedy_set
from ..normed_space import NormOracle, indicator
from . import samplers as sp
from .report import CheckReport


class MissingConstant(LookupError):
    pass


class Constants:
    """Structural constants: run overrides first, then proven oracle metadata."""

    def __init__(self, oracle: NormOracle, overrides: dict | None = None):
        self.oracle = oracle
        self.overrides = dict(overrides or {})

    def get(self, name: str, m: int | None = None, tau: float | None = None) -> float:
        if name in self.overrides:
            return float(self.overrides[name])
        if not self.oracle.exact:
            raise MissingConstant(f"{name} unknown for {self.oracle.name}")
        if name in cl.ALL_KINDS:
            if name in ("k_c", "g_c") and m == 0:
                return 1.0
            v = cl.analytic_constant(name, m, tau, self.oracle)
        elif name in ("C_b", "C_L", "C_pl") and "p" in self.oracle.metadata:
            v = 1.0  # suprema over m of nu, nu_left, nu_left_prime for lp
        elif name == "C_b1":
            v = self.oracle.metadata.get("C_b")
        else:
            v = self.oracle.metadata.get(name)
        if v is None:
            raise MissingConstant(f"{name} unknown for {self.oracle.name}")
        return float(v)


@dataclass
class Ctx:
    oracle: NormOracle
    norm_spec: str
    n: int
    seed: int
    consts: Constants
    tol_closed: float
    tol_solver: float
    solver_vectors: int

    @property
    def closed_form(self) -> bool:
        return self.oracle.suppression_unconditional

    @property
    def tol(self) -> float:
        return self.tol_closed if self.closed_form else self.tol_solver

    def nu_family(self) -> FamilyConfig:
        return FamilyConfig(dim=self.n, seed=self.seed)

    def small_family(self) -> FamilyConfig:
        return FamilyConfig(dim=self.n, grid_support=2, random_x=100 if self.closed_form else self.solver_vectors,
                            seed=self.seed)


def _norm(oracle, v) -> float:
    return float(oracle.many(np.asarray(v, float)[None, :])[0])


def _gamma(x, m, tau, oracle) -> float:
    return worst_greedy_set(np.asarray(x, float), m, tau, oracle)[0]


def _sigma(x, m, oracle):
    r = best_m_term(np.asarray(x, float), m, oracle)
    return r.value, r.converged


# ---------------------------------------------------------------- pointwise registry

@dataclass(frozen=True)
class Pointwise:
    check_id: str
    suite: str
    constants: Callable  # (Constants, m, tau) -> dict
    generate: Callable  # (rng, n, m, tau, count) -> list[dict]
    evaluate: Callable  # (inst, oracle, m, tau, consts) -> (lhs, rhs, converged)
    solver: bool = False


POINTWISE: dict[str, Pointwise] = {}


def pointwise(check_id, suite, constants=lambda C, m, tau: {}, solver=False):
    def deco(fn):
        gen, ev = fn()
        POINTWISE[check_id] = Pointwise(check_id, suite, constants, gen, ev, solver)
        return fn
    return deco


def gen_x(rng, n, m, tau, count):
    return [{"x": x.tolist()} for x in sp.sample_x(n, count, rng)] + \
        [{"x": v.tolist()} for v in ll.structured_vectors(m, tau, n)]


def gen_nu(kind):
    def gen(rng, n, m, tau, count):
        return [sp.nu_instance(rng, n, m, tau, kind) for _ in range(count)]
    return gen


# -- Theorem on L_{m,tau}

@pointwise("thm-1.1-upper", "m1", lambda C, m, tau: {"k_c": C.get("k_c", 2 * m - 1), "nu": C.get("nu", m, tau)},
           solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        s, ok = _sigma(inst["x"], m, oracle)
        return _gamma(inst["x"], m, tau, oracle), c["k_c"] * c["nu"] / tau * s, ok
    return gen_x, ev


def _avg_instance(rng, n, m, tau, count, equal_some):
    out = []
    for _ in range(count):
        k = int(rng.integers(1, m + 1))
        J = sp.random_subset(rng, range(1, n + 1), k)
        x = sp.bounded_vector(rng, n, [i for i in range(1, n + 1) if i not in J], float(rng.uniform(0.2, 3)))
        b = rng.normal(size=k) * rng.uniform(0.5, 3)
        u = rng.uniform(0, 1, size=k) * (rng.random(k) < 0.8)
        if equal_some and rng.random() < 0.5:
            u[rng.integers(k)] = 1.0
        out.append({"x": x.tolist(), "J": J, "b": b.tolist(), "a": (b * u).tolist()})
    return out


def _avg_sets(a, b):
    """Nested supports of the integrand in the averaging representation of ``x + sum a_n e_n``."""
    r = np.divide(a, b, out=np.zeros_like(a), where=b != 0)
    levels = sorted(set(float(v) for v in r if v > 0))
    sets = [np.flatnonzero(r >= lv) for lv in levels]
    if not levels or levels[-1] < 1:
        sets.append(np.array([], dtype=int))
    return sets


@pointwise("prop-2.1-avg", "m1")
def _():
    def ev(inst, oracle, m, tau, c):
        x, J = np.asarray(inst["x"]), np.asarray(inst["J"]) - 1
        a, b = np.asarray(inst["a"]), np.asarray(inst["b"])
        lhs_v = x.copy()
        lhs_v[J] += a
        rows = []
        for s in _avg_sets(a, b):
            row = x.copy()
            row[J[s]] += b[s]
            rows.append(row)
        return _norm(oracle, lhs_v), float(oracle.many(np.asarray(rows)).max()), True
    return (lambda rng, n, m, tau, count: _avg_instance(rng, n, m, tau, count, False)), ev


@pointwise("prop-2.1-bound", "m1", lambda C, m, tau: {"k_c": C.get("k_c", m), "k_c_prev": C.get("k_c", m - 1)})
def _():
    def ev(inst, oracle, m, tau, c):
        x, J = np.asarray(inst["x"]), np.asarray(inst["J"]) - 1
        a, b = np.asarray(inst["a"]), np.asarray(inst["b"])
        va, vb = x.copy(), x.copy()
        va[J] += a
        vb[J] += b
        k = c["k_c_prev"] if np.any(a == b) else c["k_c"]
        return _norm(oracle, va), k * _norm(oracle, vb), True
    return (lambda rng, n, m, tau, count: _avg_instance(rng, n, m, tau, count, True)), ev


# -- Theorem on the tilde parameter

@pointwise("thm-1.2-upper", "m2", lambda C, m, tau: {"g_c": C.get("g_c", m - 1, tau), "nu": C.get("nu", m, tau)})
def _():
    def ev(inst, oracle, m, tau, c):
        return (_gamma(inst["x"], m, tau, oracle),
                c["g_c"] * c["nu"] / tau * sigma_tilde_m(np.asarray(inst["x"]), m, oracle), True)
    return gen_x, ev


def _trunc_instance(rng, n, m, tau, count):
    out = []
    for _ in range(count):
        k = int(rng.integers(1, m + 1))
        A = sp.random_subset(rng, range(1, n + 1), k)
        alpha = float(rng.uniform(0.1, 2.0))
        x = sp.bounded_vector(rng, n, [i for i in range(1, n + 1) if i not in A], alpha / tau)
        a = alpha * (1 + rng.exponential(1.0, size=k) * (rng.random(k) < 0.8))
        if rng.random() < 0.5:
            a[rng.integers(k)] = alpha
        out.append({"x": x.tolist(), "A": A, "eps": sp.signs(rng, k), "a": a.tolist(), "alpha": alpha})
    return out


def _trunc_parts(inst):
    x, A = np.asarray(inst["x"]), np.asarray(inst["A"]) - 1
    eps, a, alpha = np.asarray(inst["eps"]), np.asarray(inst["a"]), inst["alpha"]
    flat = x.copy()
    flat[A] += alpha * eps
    y = x.copy()
    y[A] += eps * a
    return x, A, a, alpha, flat, y


@pointwise("prop-2.5-avg", "m2")
def _():
    def ev(inst, oracle, m, tau, c):
        x, A, a, alpha, flat, y = _trunc_parts(inst)
        q = alpha / a
        rows = [y.copy()]
        for lv in sorted(set(float(v) for v in q if v < 1)):
            row = y.copy()
            row[A[q <= lv]] = 0.0
            rows.append(row)
        return _norm(oracle, flat), float(oracle.many(np.asarray(rows)).max()), True
    return _trunc_instance, ev


@pointwise("prop-2.5-bound", "m2", lambda C, m, tau: {"g_c": C.get("g_c", m, tau), "g_c_prev": C.get("g_c", m - 1, tau)})
def _():
    def ev(inst, oracle, m, tau, c):
        x, A, a, alpha, flat, y = _trunc_parts(inst)
        g = c["g_c_prev"] if np.any(a == alpha) else c["g_c"]
        return _norm(oracle, flat), g * _norm(oracle, y), True
    return _trunc_instance, ev


# -- Theorem on the residual parameters

@pointwise("thm-1.4-re-upper", "m3",
           lambda C, m, tau: {"g_c": C.get("g_c", m - 1, tau), "nu_left": C.get("nu_left", m, tau)})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        r = x.copy()
        r[:m] = 0.0
        return _gamma(x, m, tau, oracle), c["g_c"] * c["nu_left"] / tau * _norm(oracle, r), True
    return gen_x, ev


@pointwise("thm-1.4-hat-upper", "m3",
           lambda C, m, tau: {"g_c": C.get("g_c", m - 1, tau), "nu_left_prime": C.get("nu_left_prime", m, tau)})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        return _gamma(x, m, tau, oracle), c["g_c"] * c["nu_left_prime"] / tau * sigma_hat_m(x, m, oracle), True
    return gen_x, ev


@pointwise("thm-1.4-schauder", "m3", lambda C, m, tau: {"K_b": C.get("K_b")})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        r = x.copy()
        r[:m] = 0.0
        return _norm(oracle, r), (c["K_b"] + 1) * sigma_hat_m(x, m, oracle), True
    return gen_x, ev


# -- Proposition relating nu' to the hat parameter

@pointwise("prop-1.3-cert", "p4")
def _():
    def ev(inst, oracle, m, tau, c):
        w = ll.y_witness_left_prime(inst, tau, oracle)
        y = np.asarray(w["x"])
        ratio = cl.evaluate_witness("nu_left_prime", oracle, inst, tau) / tau
        den = sigma_hat_m(y, w["m"], oracle)
        num = _gamma(y, w["m"], tau, oracle)
        return ratio, (num / den if den > 0 else math.inf), True
    return gen_nu("nu_left_prime"), ev


# -- Theorem on the Chebyshev parameter

def _cheb_instance(rng, n, m, tau, count):
    out = []
    base = n - m
    for x in sp.sample_x(base, count, rng):
        sets = list(iter_weak_greedy_sets(x, m, tau))
        A = sorted(i + 1 for i in sets[int(rng.integers(len(sets)))])
        out.append({"x": x.tolist(), "A": A})
    return out


def _cheb(inst, oracle, m):
    return ll.chebyshev_witnesses(inst, m, oracle)


@pointwise("thm-1.5-cert-y", "m4", lambda C, m, tau: {"K_b": C.get("K_b")}, solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        w = _cheb(inst, oracle, m)
        return w["residual"], c["K_b"] * w["cheb_y"], True
    return _cheb_instance, ev


@pointwise("thm-1.5-cert-z", "m4", lambda C, m, tau: {"K_b": C.get("K_b")}, solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        w = _cheb(inst, oracle, m)
        return w["alpha_block"], (c["K_b"] + 1) * w["cheb_z"], True
    return _cheb_instance, ev


@pointwise("thm-1.5-sigma", "m4", solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        w = _cheb(inst, oracle, m)
        sy, oky = _sigma(w["y"], m, oracle)
        sz, okz = _sigma(w["z"], m, oracle)
        gap = max(sy - w["sigma_y_upper"], sz - w["sigma_z_upper"])
        return gap, 0.0, oky and okz
    return _cheb_instance, ev


@pointwise("thm-1.5-bound", "m4", lambda C, m, tau: {"K_b": C.get("K_b")}, solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        w = _cheb(inst, oracle, m)
        sy, oky = _sigma(w["y"], m, oracle)
        sz, okz = _sigma(w["z"], m, oracle)
        if sy <= 0 or sz <= 0:
            return w["residual"], math.inf, True
        rho = max(w["cheb_y"] / sy, w["cheb_z"] / sz)
        kb = c["K_b"]
        xnorm = _norm(oracle, inst["x"])
        return w["residual"], kb * rho * (1 + rho + rho * kb) * xnorm, oky and okz
    return _cheb_instance, ev


# -- characterisations of greedy-type constants

def _sup_check(check_id, names, denom, solver=False):
    def consts(C, m, tau):
        return {k: C.get(k, m, tau) if k in ("C_b", "C_L", "C_pl") else C.get(k) for k in names}

    @pointwise(check_id, "s4", consts, solver)
    def _():
        def ev(inst, oracle, m, tau, c):
            x = np.asarray(inst["x"])
            d, ok = denom(x, m, oracle)
            return _gamma(x, m, tau, oracle), float(np.prod([c[k] for k in names])) / tau * d, ok
        return gen_x, ev


def _den_re(x, m, oracle):
    r = x.copy()
    r[:m] = 0.0
    return _norm(oracle, r), True


_sup_check("thm-m6-greedy", ("K_s", "C_b"), _sigma, solver=True)
_sup_check("thm-m7-almost-greedy", ("C_l", "C_b"), lambda x, m, o: (sigma_tilde_m(x, m, o), True))
_sup_check("thm-strong-partial", ("C_l", "C_pl"), lambda x, m, o: (sigma_hat_m(x, m, o), True))
_sup_check("thm-m9-partial", ("C_l", "C_L"), _den_re)


def _psi_instance(rng, n, m, tau, count):
    out = []
    for _ in range(count):
        k = int(rng.integers(1, min(m, n // 2) + 1))
        AB = sp.random_subset(rng, range(1, n + 1), 2 * k)
        out.append({"A": AB[k:], "B": AB[:k], "eps": sp.signs(rng, k), "delta": sp.signs(rng, k), "n": n})
    return out


@pointwise("thm-m9-witness", "s4")
def _():
    def ev(inst, oracle, m, tau, c):
        w = ll.psi_witness(inst, tau, oracle)
        y = np.asarray(w["x"])
        r = y.copy()
        r[:w["m"]] = 0.0
        return (cl.evaluate_witness("psi", oracle, inst) / tau,
                _gamma(y, w["m"], tau, oracle) / _norm(oracle, r), True)
    return _psi_instance, ev


# -- property (A, tau) across tau, democracy, characterisation

def _nu_ratio(inst, oracle, tau):
    return cl.evaluate_witness("nu", oracle, inst, tau)


@pointwise("prop-pp1-1", "s5", lambda C, m, tau: {"C_b1": C.get("C_b1"), "K_s": C.get("K_s")})
def _():
    def ev(inst, oracle, m, tau, c):
        return _nu_ratio(inst, oracle, tau), c["C_b1"] * c["K_s"], True
    return gen_nu("nu"), ev


def _scaling_instance(rng, n, m, tau, count):
    out = []
    for inst in gen_nu("nu")(rng, n, m, tau, count):
        inst["tau2"] = float(tau * rng.uniform(0.05, 1.0))
        out.append(inst)
    return out


@pointwise("prop-pp1-2", "s5")
def _():
    def ev(inst, oracle, m, tau, c):
        tau2 = inst["tau2"]
        x = np.asarray(inst["x"])
        B = tuple(inst["B"])
        from ..families import sign_patterns, signed_indicator_rows
        pats, _ = sign_patterns(len(B), 20)
        rows = tau2 * x[None, :] + signed_indicator_rows(x.size, B, pats)
        den = _norm(oracle, x + indicator(inst["A"], inst["eps"], x.size))
        best = float(oracle.many(rows).max()) / den
        return _nu_ratio(inst, oracle, tau), tau / tau2 * best, True
    return _scaling_instance, ev


@pointwise("prop-pp2", "s5", lambda C, m, tau: {"C_b": C.get("C_b", m, tau), "C_l": C.get("C_l")})
def _():
    def ev(inst, oracle, m, tau, c):
        # the witness is drawn for the sup-norm bound of gamma = tau and tested at that gamma
        return _nu_ratio(inst, oracle, tau), 2 * c["C_b"] ** 2 * c["C_l"], True
    return gen_nu("nu"), ev


@pointwise("cor-pc10", "s5", lambda C, m, tau: {"C_b1": C.get("C_b1")})
def _():
    def ev(inst, oracle, m, tau, c):
        if c["C_b1"] != 1:
            return -math.inf, 2.0, True
        return _nu_ratio(inst, oracle, tau), 2.0, True
    return gen_nu("nu"), ev


def _char_instance(rng, n, m, tau, count):
    out = []
    for _ in range(count):
        k = int(rng.integers(1, m + 1))
        L = sp.random_subset(rng, range(1, n + 1), k)
        x = sp.bounded_vector(rng, n, [i for i in range(1, n + 1) if i not in L], 1.0 / tau)
        out.append({"x": x.tolist(), "L": L, "eps": sp.signs(rng, k)})
    return out


_FUND_CACHE: dict = {}


def _fundamental(oracle, k, n):
    key = (id(oracle), k, n)
    if key not in _FUND_CACHE:
        _FUND_CACHE[key] = cl.fundamental_function(k, oracle, FamilyConfig(dim=n)).lower_bound
    return _FUND_CACHE[key]


@pointwise("thm-char-lower", "s5", lambda C, m, tau: {"C_b": C.get("C_b", m, tau)})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        cb = c["C_b"]
        c2 = 2.0 / (cb ** 2 * (1 + cb ** 2))
        f = _fundamental(oracle, len(inst["L"]), x.size)
        return c2 * f, _norm(oracle, x + indicator(inst["L"], inst["eps"], x.size)), True
    return _char_instance, ev


@pointwise("thm-char-upper", "s5")
def _():
    def ev(inst, oracle, m, tau, c):
        n = len(inst["x"])
        return _norm(oracle, indicator(inst["L"], inst["eps"], n)), _fundamental(oracle, len(inst["L"]), n), True
    return _char_instance, ev


@pointwise("thm-truncation", "s5", lambda C, m, tau: {"C_l": C.get("C_l")})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        alpha = float(inst["alpha"])
        return _norm(oracle, np.clip(x, -alpha, alpha)), c["C_l"] * _norm(oracle, x), True

    def gen(rng, n, m, tau, count):
        return [{"x": x.tolist(), "alpha": float(np.abs(x).max() * rng.uniform(0.05, 1.0))}
                for x in sp.sample_x(n, count, rng)]
    return gen, ev


@pointwise("prop-ppp1", "s5", lambda C, m, tau: {"lambda": C.get("lambda")})
def _():
    def ev(inst, oracle, m, tau, c):
        return _nu_ratio(inst, oracle, tau), 3 * c["lambda"], True
    return gen_nu("nu"), ev


# -- from classical to weak constants

def _pl2_instance(rng, n, m, tau, count):
    out = []
    for x in sp.sample_x(n, count, rng):
        k = int(rng.integers(1, n + 1))
        A2 = sp.random_subset(rng, range(1, n + 1), k)
        idx = np.asarray(A2) - 1
        x[idx] = rng.uniform(tau, 1.0, size=k) * rng.choice((1.0, -1.0), size=k)
        x[idx[rng.random(k) < 0.2]] = tau * rng.choice((1.0, -1.0))
        A1 = sp.random_subset(rng, A2, int(rng.integers(0, k + 1)))
        out.append({"x": x.tolist(), "A1": A1, "A2": A2})
    return out


def _proj(x, S):
    out = np.zeros_like(x)
    idx = np.asarray(S, int) - 1
    out[idx] = x[idx]
    return out


@pointwise("lemma-pl2", "s6", lambda C, m, tau: {"C_w": C.get("C_w")})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        return (_norm(oracle, _proj(x, inst["A1"])),
                8 * c["C_w"] ** 3 / tau * _norm(oracle, _proj(x, inst["A2"])), True)
    return _pl2_instance, ev


@pointwise("lemma-gu-1", "s6", lambda C, m, tau: {"C_w": C.get("C_w")})
def _():
    def ev(inst, oracle, m, tau, c):
        n = len(inst["v"])
        v = np.asarray(inst["v"])
        return (_norm(oracle, v), 2 * c["C_w"] * float(np.abs(v).max())
                * _norm(oracle, indicator(inst["A"], inst["eps"], n)), True)

    def gen(rng, n, m, tau, count):
        out = []
        for _ in range(count):
            k = int(rng.integers(1, n + 1))
            A = sp.random_subset(rng, range(1, n + 1), k)
            v = np.zeros(n)
            v[np.asarray(A) - 1] = rng.normal(size=k) * (rng.random(k) < 0.9)
            out.append({"v": v.tolist(), "A": A, "eps": sp.signs(rng, k)})
        return out
    return gen, ev


@pointwise("lemma-gu-2", "s6", lambda C, m, tau: {"C_l": C.get("C_l"), "C_w": C.get("C_w")})
def _():
    def ev(inst, oracle, m, tau, c):
        x = np.asarray(inst["x"])
        A = np.asarray(inst["A"]) - 1
        delta = np.where(x[A] >= 0, 1.0, -1.0)
        lhs = float(np.abs(x[A]).min()) * _norm(oracle, indicator(inst["A"], delta, x.size))
        return lhs, 2 * min(c["C_l"], c["C_w"]) * _norm(oracle, x), True

    def gen(rng, n, m, tau, count):
        out = []
        for x in sp.sample_x(n, count, rng):
            k = int(rng.integers(1, n + 1))
            sets = list(iter_weak_greedy_sets(x, k, 1.0))
            A = sorted(i + 1 for i in sets[int(rng.integers(len(sets)))])
            out.append({"x": x.tolist(), "A": A})
        return out
    return gen, ev


@pointwise("thm-pst2", "s6", lambda C, m, tau: {"C_w": C.get("C_w")})
def _():
    def ev(inst, oracle, m, tau, c):
        cw = c["C_w"]
        return _gamma(inst["x"], m, tau, oracle), (1 + cw + 16 * cw ** 4 / tau) * _norm(oracle, inst["x"]), True
    return gen_x, ev


@pointwise("thm-pst4", "s6", lambda C, m, tau: {"C_g": C.get("C_g")}, solver=True)
def _():
    def ev(inst, oracle, m, tau, c):
        cg = c["C_g"]
        s, ok = _sigma(inst["x"], m, oracle)
        return _gamma(inst["x"], m, tau, oracle), (cg ** 4 / tau + cg) * s, ok
    return gen_x, ev


def _pst3_parts(x, m, tau, oracle):
    """Yield ``(lhs/rhs pieces)`` for every tau-weak greedy ``B`` against a tilde-optimal ``A``."""
    from ..approx_errors import _supports
    from ..greedy_engine import residual_rows

    sets = list(_supports(x.size, m, 10**6))
    vals = oracle.many(residual_rows(x, sets))
    A = set(int(i) + 1 for i in sets[int(np.argmin(vals))])
    resA = float(vals.min())
    for s in iter_weak_greedy_sets(x, m, tau):
        B = set(i + 1 for i in s)
        yield (_norm(oracle, x - _proj(x, sorted(B))), resA,
               _norm(oracle, _proj(x, sorted(A - B))), _norm(oracle, _proj(x, sorted(B - A))))


def _pst3(check_id, consts, side):
    @pointwise(check_id, "s6", consts)
    def _():
        def ev(inst, oracle, m, tau, c):
            worst = (-math.inf, 0.0)
            for parts in _pst3_parts(np.asarray(inst["x"]), m, tau, oracle):
                lhs, rhs = side(parts, tau, c)
                if lhs - rhs > worst[0] - worst[1]:
                    worst = (lhs, rhs)
            return worst[0], worst[1], True
        return gen_x, ev


_pst3("thm-pst3-triangle", lambda C, m, tau: {},
      lambda p, tau, c: (p[0], p[1] + p[2] + p[3]))
_pst3("thm-pst3-greedy-part", lambda C, m, tau: {"C_w": C.get("C_w")},
      lambda p, tau, c: (p[3], (c["C_w"] + 16 * c["C_w"] ** 4 / tau) * p[1]))
_pst3("thm-pst3-a-part", lambda C, m, tau: {"C_a": C.get("C_a")},
      lambda p, tau, c: (p[2], 4 * (c["C_a"] + 1) * c["C_a"] ** 2 / tau * p[3]))


def run_pointwise(spec: Pointwise, ctx: Ctx, m: int, tau: float, trials: int) -> CheckReport:
    t0 = time.perf_counter()
    cfg = {"n": ctx.n, "m": m, "tau": tau, "seed": ctx.seed, "trials": trials}
    exact = ctx.oracle.exact or bool(ctx.consts.overrides)
    rep = CheckReport(spec.check_id, spec.suite, ctx.norm_spec, cfg, "exact" if exact else "estimate")
    try:
        consts = spec.constants(ctx.consts, m, tau)
    except MissingConstant as err:
        rep.status, rep.reason = "skipped", f"missing constant: {err}"
        return rep
    cfg["constants"] = consts
    rng = rng_for(ctx.seed, spec.check_id, ctx.norm_spec, m, tau)
    instances = spec.generate(rng, ctx.n, m, tau, trials)
    tol = ctx.tol_solver if (spec.solver and not ctx.closed_form) else ctx.tol_closed
    worst_gap, worst = -math.inf, None
    best_ratio = None
    for i, inst in enumerate(instances):
        lhs, rhs, ok = spec.evaluate(inst, ctx.oracle, m, tau, consts)
        if not ok:
            rep.flagged += 1
            continue
        rep.instances += 1
        if rhs > 0 and math.isfinite(rhs) and math.isfinite(lhs):
            r = lhs / rhs
            best_ratio = r if best_ratio is None else max(best_ratio, r)
        gap = lhs - rhs
        if gap > worst_gap:
            worst_gap, worst = gap, (lhs, rhs)
        if lhs > rhs + tol * max(1.0, abs(rhs)):
            rep.add_violation({"index": i, "instance": inst, "lhs": lhs, "rhs": rhs, "m": m, "tau": tau,
                               "seed": ctx.seed, "constants": consts})
    if worst is not None:
        rep.lhs, rep.rhs = worst
    rep.extremal_ratio = best_ratio
    rep.runtime = time.perf_counter() - t0
    return rep


def replay_violation(check_id: str, record: dict, oracle: NormOracle):
    """Re-evaluate one stored pointwise violation: returns ``(lhs, rhs)``."""
    spec = POINTWISE[check_id]
    lhs, rhs, _ = spec.evaluate(record["instance"], oracle, record["m"], record["tau"], record["constants"])
    return lhs, rhs


# ---------------------------------------------------------------- estimate-level checks

def _estimate_report(check_id, suite, ctx, m, tau, lhs, rhs, relation, detail, tol=None):
    """``relation`` is ``"ge"`` (assert lhs >= rhs) or ``"le"`` (assert lhs <= rhs)."""
    tol = ctx.tol if tol is None else tol
    cfg = {"n": ctx.n, "m": m, "tau": tau, "seed": ctx.seed, "relation": relation}
    rep = CheckReport(check_id, suite, ctx.norm_spec, cfg, "estimate", lhs=lhs, rhs=rhs, instances=1)
    if rhs not in (0, None) and math.isfinite(rhs):
        rep.extremal_ratio = lhs / rhs
    bad = lhs < rhs - tol * max(1.0, abs(rhs)) if relation == "ge" else lhs > rhs + tol * max(1.0, abs(rhs))
    if bad:
        rep.add_violation({"lhs": lhs, "rhs": rhs, "m": m, "tau": tau, "seed": ctx.seed, "estimates": detail})
    return rep


def _est_json(e):
    return {"kind": e.kind, "m": e.m, "tau": e.tau, "lower_bound": e.lower_bound, "witness": e.witness}


def est_thm_m1_lower(ctx, m, tau):
    nu = cl.estimate_nu(m, tau, ctx.oracle, ctx.nu_family())
    kc = cl.estimate_k_c(m, ctx.oracle, ctx.small_family())
    extra = [ll.z_witness(nu.witness, m, tau, ctx.oracle), ll.kc_witness(kc.witness, m, ctx.oracle)]
    L = ll.estimate_L(m, tau, ctx.oracle, ctx.small_family(), extra)
    Lt = ll.estimate_L_tilde(m, tau, ctx.oracle, ctx.small_family(), extra)
    rhs = max(kc.lower_bound, nu.lower_bound / tau)
    if ctx.closed_form:
        rhs = max(rhs, Lt.lower_bound)
    return _estimate_report("thm-1.1-lower", "m1", ctx, m, tau, L.lower_bound, rhs, "ge",
                            [_est_json(nu), _est_json(kc), L.to_json(), Lt.to_json()])


def est_thm_m2_lower(ctx, m, tau):
    nu = cl.estimate_nu(m, tau, ctx.oracle, ctx.nu_family())
    gc = cl.estimate_g_c(m, tau, ctx.oracle, ctx.small_family())
    extra = [ll.z_witness(nu.witness, m, tau, ctx.oracle), ll.gc_witness(gc.witness, m, ctx.oracle)]
    Lt = ll.estimate_L_tilde(m, tau, ctx.oracle, ctx.small_family(), extra)
    return _estimate_report("thm-1.2-lower", "m2", ctx, m, tau, Lt.lower_bound,
                            max(gc.lower_bound, nu.lower_bound / tau), "ge",
                            [_est_json(nu), _est_json(gc), Lt.to_json()])


def est_thm_m3_m1(ctx, m, tau):
    """At order one the hat parameter equals nu'/tau; exact oracles check equality, others the lower half."""
    fam = FamilyConfig(dim=ctx.n, seed=ctx.seed)
    nup = cl.estimate_nu_left_prime(1, tau, ctx.oracle, fam)
    w = ll.y_witness_left_prime(nup.witness, tau, ctx.oracle)
    Lh = ll.estimate_L_hat_re(1, tau, ctx.oracle, ctx.small_family(), [w] if w["m"] == 1 else [])
    target = nup.lower_bound / tau
    detail = [_est_json(nup), Lh.to_json()]
    if ctx.oracle.exact:
        rep = _estimate_report("thm-1.4-m1-equality", "m3", ctx, 1, tau, Lh.lower_bound, target, "ge", detail, 1e-3)
        if abs(Lh.lower_bound - target) > 1e-3 and rep.status == "pass":
            rep.add_violation({"lhs": Lh.lower_bound, "rhs": target, "m": 1, "tau": tau, "seed": ctx.seed,
                               "estimates": detail})
        return rep
    return _estimate_report("thm-1.4-m1-lower", "m3", ctx, 1, tau, Lh.lower_bound, target, "ge", detail)


def est_prop_p4(ctx, m, tau):
    nup = cl.estimate_nu_left_prime(m, tau, ctx.oracle, ctx.nu_family())
    w = ll.y_witness_left_prime(nup.witness, tau, ctx.oracle)
    best = 1.0  # order 0: gamma_0 = sigma^_0 = ||x||
    ests = []
    for k in range(1, m + 1):
        e = ll.estimate_L_hat_re(k, tau, ctx.oracle, ctx.small_family(), [w] if w["m"] == k else [])
        ests.append(e.to_json())
        best = max(best, e.lower_bound)
    return _estimate_report("prop-1.3-lower", "p4", ctx, m, tau, best, nup.lower_bound / tau, "ge",
                            [_est_json(nup)] + ests)


def est_thm_m4(ctx, m, tau):
    try:
        kb = ctx.consts.get("K_b")
    except MissingConstant as err:
        cfg = {"n": ctx.n, "m": m, "tau": tau, "seed": ctx.seed}
        return [CheckReport(cid, "m4", ctx.norm_spec, cfg, "estimate", status="skipped",
                            reason=f"missing constant: {err}") for cid in ("thm-1.5-lower", "thm-1.5-corollary")]
    fam = ctx.small_family()
    gc = cl.estimate_g_c(m, tau, ctx.oracle, fam, exact_order=True)
    w = ll.chebyshev_witnesses(gc.witness, m, ctx.oracle)
    Lch = ll.estimate_L_ch(m, tau, ctx.oracle, FamilyConfig(dim=ctx.n, random_x=ctx.solver_vectors, seed=ctx.seed),
                           [w["y"], w["z"]], structured=True)
    rho = Lch.lower_bound
    detail = [_est_json(gc), Lch.to_json()]
    r1 = _estimate_report("thm-1.5-lower", "m4", ctx, m, tau, gc.lower_bound, kb * rho * (1 + rho + rho * kb),
                          "le", detail, ctx.tol_solver)
    r2 = _estimate_report("thm-1.5-corollary", "m4", ctx, m, tau, rho, math.sqrt(gc.lower_bound / 3) / kb,
                          "ge", detail, ctx.tol_solver)
    return [r1, r2]


def est_section4(ctx, m, tau):
    out = []
    fam = ctx.nu_family()
    nul = cl.estimate_nu_left(m, tau, ctx.oracle, fam)
    psi = cl.estimate_psi(m, ctx.oracle, fam)
    out.append(_estimate_report("lemma-l20-left", "s4", ctx, m, tau, nul.lower_bound, psi.lower_bound, "ge",
                                [_est_json(nul), _est_json(psi)]))
    try:
        cl_, csc = ctx.consts.get("C_l"), ctx.consts.get("C_sc")
        out.append(_estimate_report("lemma-l20-right", "s4", ctx, m, tau, nul.lower_bound,
                                    tau * cl_ + csc + cl_ * csc, "le", [_est_json(nul)]))
    except MissingConstant:
        pass
    try:
        bound = ctx.consts.get("K_s") * ctx.consts.get("C_b", m, tau) / tau
        L = ll.estimate_L(m, tau, ctx.oracle, ctx.small_family())
        out.append(_estimate_report("thm-m6-estimate", "s4", ctx, m, tau, L.lower_bound, bound, "le", [L.to_json()]))
    except MissingConstant:
        pass
    return out


def est_section5(ctx, m, tau):
    out = []
    nu = cl.estimate_nu(m, tau, ctx.oracle, ctx.nu_family())
    try:
        if ctx.consts.get("C_b1") == 1:
            out.append(_estimate_report("cor-pc10-estimate", "s5", ctx, m, tau, nu.lower_bound, 2.0, "le",
                                        [_est_json(nu)]))
        out.append(_estimate_report("prop-pp1-1-estimate", "s5", ctx, m, tau, nu.lower_bound,
                                    ctx.consts.get("C_b1") * ctx.consts.get("K_s"), "le", [_est_json(nu)]))
        cb = ctx.consts.get("C_b", m, tau)
        mu = cl.estimate_mu(m, ctx.oracle, ctx.nu_family())
        out.append(_estimate_report("lemma-pl7", "s5", ctx, m, tau, mu.lower_bound, min(2 * cb / tau, cb ** 2),
                                    "le", [_est_json(mu)]))
    except MissingConstant:
        pass
    return out


ESTIMATE_CHECKS = {
    "m1": [est_thm_m1_lower],
    "m2": [est_thm_m2_lower],
    "m3": [est_thm_m3_m1],
    "p4": [est_prop_p4],
    "m4": [est_thm_m4],
    "s4": [est_section4],
    "s5": [est_section5],
    "s6": [],
}


def run_suite(suite: str, ctx: Ctx, m_grid, tau_grid, trials_per_m: int) -> list[CheckReport]:
    """Every pointwise and estimate check of ``suite`` over the (m, tau) grid, in a fixed order."""
    reports = []
    specs = [s for s in POINTWISE.values() if s.suite == suite]
    for tau in tau_grid:
        for m in m_grid:
            for spec in specs:
                reports.append(run_pointwise(spec, ctx, m, tau, trials_per_m))
            for fn in ESTIMATE_CHECKS[suite]:
                if fn is est_thm_m3_m1 and m != 1:
                    continue
                t0 = time.perf_counter()
                res = fn(ctx, m, tau)
                res = res if isinstance(res, list) else [res]
                for r in res:
                    r.runtime = time.perf_counter() - t0
                reports.extend(res)
    return reports
