"""Lower-bound estimators for the structural constants.

Every estimate is a maximum over an explicit candidate family, so it is a
certified lower bound: the reported witness reproduces the value through
:func:`evaluate_witness`.  Analytic upper values are attached only when the
oracle carries proven metadata.

Kinds and the ratios they maximise (``1_{eS}`` is the signed indicator):

``nu``        ``||tau x + 1_{dB}|| / ||x + 1_{eA}||``, ``|B| <= |A| <= m``, ``A, B, supp x`` disjoint
``nu_left``   same ratio, ``|A| = |B| <= m`` and ``B < A``
``nu_left_prime``  ``|B| <= |A| <= m``, ``B < supp(x) u A`` (disjoint), ``max B <= m``
``omega*``    ``||x|| / ||x - P_B x + 1_{eA}||`` with ``||x||_inf <= 1/tau`` and the matching constraints
``mu``, ``psi``  ``||1_{dB}|| / ||1_{eA}||``, ``|A| = |B| <= m`` (``psi`` adds ``B < A``)
``k``, ``k_c``   ``||P_A x|| / ||x||`` and ``||x - P_A x|| / ||x||`` over ``|A| <= m``
``g``, ``g_c``   the same over tau-weak greedy sets of every order ``<= m``
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .families import (FamilyConfig, chunked_norms, limit_pairs, rng_for, sign_patterns,
                       signed_indicator_rows, subsets, x_candidates)
from .greedy_engine import iter_weak_greedy_sets
from .normed_space import DomainError, NormOracle, _as_array, indicator

NU_KINDS = ("nu", "nu_left", "nu_left_prime")
OMEGA_KINDS = ("omega", "omega_left", "omega_left_prime")
SET_KINDS = ("mu", "psi")
PROJ_KINDS = ("k", "k_c")
GREEDY_KINDS = ("g", "g_c")
ALL_KINDS = NU_KINDS + OMEGA_KINDS + SET_KINDS + PROJ_KINDS + GREEDY_KINDS + ("fundamental",)


@dataclass
class ConstantEstimate:
    kind: str
    m: int
    tau: float | None
    lower_bound: float
    witness: dict | None
    analytic_upper: float | None = None
    family: dict = field(default_factory=dict)
    seed: int = 0
    exhaustive: bool = True

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": self.m, "tau": self.tau, "lower_bound": self.lower_bound,
                "analytic_upper": self.analytic_upper, "witness": self.witness, "seed": self.seed,
                "family": self.family, "exhaustive": self.exhaustive}


def _check(m: int, tau: float | None, oracle: NormOracle, n: int) -> None:
    if m < 0:
        raise DomainError("order m must be >= 0")
    if tau is not None and not 0 < tau <= 1:
        raise DomainError(f"tau must lie in (0, 1], got {tau}")
    if oracle.max_dim is not None and n > oracle.max_dim:
        raise DomainError(f"dimension {n} exceeds the oracle's {oracle.max_dim}")


# ---------------------------------------------------------------- analytic values

def analytic_constant(kind: str, m: int, tau: float | None, oracle: NormOracle) -> float | None:
    """Exact value of a constant for the lp oracles, else ``None``.

    For lp every coordinate projection has norm one and ``||1_{eA}||`` only
    depends on ``|A|``, which pins all the constants below.
    """
    if not (oracle.exact and "p" in oracle.metadata):
        return None
    p = float(oracle.metadata["p"])
    if kind in NU_KINDS:
        return 1.0 if m >= 1 else tau
    if kind in OMEGA_KINDS:
        return 1.0 / tau if m >= 1 else 1.0
    if kind in SET_KINDS + ("k_c", "g_c"):
        return 1.0
    if kind in ("k", "g"):
        return 1.0 if m >= 1 else 0.0
    if kind == "fundamental":
        return 1.0 if math.isinf(p) else m ** (1.0 / p)
    return None


# ---------------------------------------------------------------- set pairs

_PAIR_RULES = {
    # kind: (|B| = |A| required, B < A required, max B <= m required)
    "nu": (False, False, False),
    "nu_left": (True, True, False),
    "nu_left_prime": (False, True, True),
    "omega": (True, False, False),
    "omega_left": (True, True, False),
    "omega_left_prime": (False, True, True),
}


def nu_pairs(kind: str, n: int, m: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Admissible disjoint ``(A, B)`` for a nu- or omega-type kind inside ``{1..n}``."""
    equal, left, capped = _PAIR_RULES[kind]
    out = []
    for A in subsets(n, m):
        rest = [i for i in range(1, n + 1) if i not in A]
        for k in ([len(A)] if equal else range(len(A) + 1)):
            for B in itertools.combinations(rest, k):
                if B and left and A and max(B) >= min(A):
                    continue
                if B and capped and max(B) > m:
                    continue
                out.append((A, B))
    return out


def x_positions(kind: str, n: int, A, B) -> tuple[int, ...]:
    """Coordinates where the free vector may live for the given kind."""
    a, b = set(A), set(B)
    if kind in ("nu", "nu_left"):
        return tuple(i for i in range(1, n + 1) if i not in a and i not in b)
    if kind == "nu_left_prime":
        lo = max(B) if B else 0
        return tuple(i for i in range(lo + 1, n + 1) if i not in a)
    if kind in ("omega", "omega_left"):
        return tuple(i for i in range(1, n + 1) if i not in a)
    if kind == "omega_left_prime":
        lo = max(B) if B else 0
        return tuple(i for i in range(1, n + 1) if (i in b) or (i > lo and i not in a))
    raise DomainError(f"no free vector for kind {kind!r}")


# ---------------------------------------------------------------- ratios for a single witness

def evaluate_witness(kind: str, oracle: NormOracle, witness: dict, tau: float | None = None) -> float:
    """Recompute the ratio a witness certifies (``nan`` for a zero denominator)."""
    tau = witness.get("tau", tau)
    if kind in NU_KINDS:
        x = np.asarray(witness["x"], float)
        n = x.size
        num = oracle.many((tau * x + indicator(witness["B"], witness["delta"], n))[None, :])[0]
        den = oracle.many((x + indicator(witness["A"], witness["eps"], n))[None, :])[0]
    elif kind in OMEGA_KINDS:
        x = np.asarray(witness["x"], float)
        n = x.size
        t = float(witness.get("t", 1.0))
        y = x.copy()
        y[np.asarray(witness["B"], int) - 1] = 0.0
        num = oracle.many(x[None, :])[0]
        den = oracle.many((y + t * indicator(witness["A"], witness["eps"], n))[None, :])[0]
    elif kind in SET_KINDS:
        n = int(witness["n"])
        num = oracle.many(indicator(witness["B"], witness["delta"], n)[None, :])[0]
        den = oracle.many(indicator(witness["A"], witness["eps"], n)[None, :])[0]
    elif kind in PROJ_KINDS + GREEDY_KINDS:
        x = np.asarray(witness["x"], float)
        proj = np.zeros_like(x)
        idx = np.asarray(witness["A"], int) - 1
        proj[idx] = x[idx]
        top = proj if kind in ("k", "g") else x - proj
        num = oracle.many(top[None, :])[0]
        den = oracle.many(x[None, :])[0]
    elif kind == "fundamental":
        return float(oracle.many(indicator(witness["A"], witness["eps"], int(witness["n"]))[None, :])[0])
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return float(num / den) if den > 0 else math.nan


# ---------------------------------------------------------------- nu / omega search

class _Best:
    """Running maximum; the first candidate reaching the maximum is kept."""

    def __init__(self):
        self.value = -math.inf
        self.witness = None

    def offer(self, value: float, make_witness) -> None:
        if value > self.value:
            self.value = float(value)
            self.witness = make_witness()


def _sign_rows(n, idx, cfg, rng):
    pats, full = sign_patterns(len(idx), cfg.sign_budget, rng, cfg.random_signs)
    return signed_indicator_rows(n, idx, pats), pats, full


def _search_pairs(kind: str, m: int, tau: float, oracle: NormOracle, cfg: FamilyConfig,
                  extra: list[dict] | None, label: str) -> ConstantEstimate:
    n = cfg.dim
    _check(m, tau, oracle, n)
    rng = rng_for(cfg.seed, label, kind, m, tau)
    pairs, all_pairs = limit_pairs(nu_pairs(kind, n, m), cfg, rng)
    omega = kind in OMEGA_KINDS
    best = _Best()
    exhaustive_signs = True
    skipped = candidates = 0
    for A, B in pairs:
        X = x_candidates(n, x_positions(kind, n, A, B), 1.0 / tau, cfg, rng)
        r = X.shape[0]
        den_sign, eps_pats, full_a = _sign_rows(n, A, cfg, rng)
        base = X
        if omega and B:
            base = X.copy()
            base[:, np.asarray(B) - 1] = 0.0
        den = chunked_norms(oracle, (base[:, None, :] + den_sign[None, :, :]).reshape(-1, n)).reshape(r, -1)
        eps_arg = np.argmin(den, axis=1)
        den_min = den[np.arange(r), eps_arg]
        if omega:
            num_max = chunked_norms(oracle, X)
            delta_arg = np.zeros(r, dtype=int)
            full_b, delta_pats = True, None
        else:
            num_sign, delta_pats, full_b = _sign_rows(n, B, cfg, rng)
            num = chunked_norms(oracle, (tau * X[:, None, :] + num_sign[None, :, :]).reshape(-1, n)).reshape(r, -1)
            delta_arg = np.argmax(num, axis=1)
            num_max = num[np.arange(r), delta_arg]
        exhaustive_signs = exhaustive_signs and full_a and full_b
        ok = den_min > 0
        skipped += int((~ok).sum())
        candidates += r
        if not ok.any():
            continue
        ratio = np.where(ok, num_max / np.where(ok, den_min, 1.0), -math.inf)
        i = int(np.argmax(ratio))

        def make(i=i, A=A, B=B, X=X, eps_pats=eps_pats, delta_pats=delta_pats):
            w = {"x": X[i].tolist(), "A": list(A), "B": list(B),
                 "eps": eps_pats[eps_arg[i]].tolist(), "tau": tau}
            if omega:
                w["t"] = 1.0
            else:
                w["delta"] = delta_pats[delta_arg[i]].tolist()
            return w

        best.offer(ratio[i], make)
    for w in extra or ():
        v = evaluate_witness(kind, oracle, w, tau)
        if not math.isnan(v):
            best.offer(v, lambda w=w: dict(w, tau=tau))
    family = {"config": cfg.to_json(), "pairs": len(pairs), "candidates": candidates,
              "skipped_zero_denominators": skipped, "extra": len(extra or ())}
    return ConstantEstimate(kind, m, tau, best.value, best.witness, analytic_constant(kind, m, tau, oracle),
                            family, cfg.seed, exhaustive_signs and all_pairs)


def estimate_nu(m, tau, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _search_pairs("nu", m, tau, oracle, family or FamilyConfig(), extra, "nu")


def estimate_nu_left(m, tau, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _search_pairs("nu_left", m, tau, oracle, family or FamilyConfig(), extra, "nu_left")


def estimate_nu_left_prime(m, tau, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _search_pairs("nu_left_prime", m, tau, oracle, family or FamilyConfig(), extra, "nu_left_prime")


def estimate_omega(m, tau, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _search_pairs("omega", m, tau, oracle, family or FamilyConfig(), extra, "omega")


def estimate_omega_left(m, tau, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _search_pairs("omega_left", m, tau, oracle, family or FamilyConfig(), extra, "omega_left")


def estimate_omega_left_prime(m, tau, oracle, family: FamilyConfig | None = None,
                              extra=None) -> ConstantEstimate:
    return _search_pairs("omega_left_prime", m, tau, oracle, family or FamilyConfig(), extra, "omega_left_prime")


# ---------------------------------------------------------------- witness transforms

def nu_omega_witness_transform(witness: dict, tau: float) -> dict:
    """Map a nu-type witness to an omega-type one.

    With ``y = tau x + 1_{dB}`` and ``t = tau`` the omega ratio of ``y`` equals
    the nu ratio divided by ``tau``; the sup-norm bound ``||y||_inf <= t/tau``
    holds because ``||tau x||_inf <= 1``.  Works for all three variants.
    """
    x = np.asarray(witness["x"], float)
    y = tau * x + indicator(witness["B"], witness["delta"], x.size)
    return {"x": y.tolist(), "A": list(witness["A"]), "B": list(witness["B"]),
            "eps": list(witness["eps"]), "t": float(tau), "tau": tau}


def omega_nu_witness_transform(witness: dict, tau: float, oracle: NormOracle) -> dict:
    """Map an omega-type witness back to a nu-type one.

    ``x' = (x - P_B x)/t`` with the sign pattern on ``B`` maximising the
    numerator; its nu ratio is at least ``tau`` times the omega ratio.
    """
    x = np.asarray(witness["x"], float) / float(witness.get("t", 1.0))
    B = list(witness["B"])
    xp = x.copy()
    if B:
        xp[np.asarray(B) - 1] = 0.0
    pats, _ = sign_patterns(len(B), 20, rng_for(0, "omega_nu"), 64)
    rows = tau * xp[None, :] + signed_indicator_rows(x.size, tuple(B), pats)
    d = pats[int(np.argmax(oracle.many(rows)))]
    return {"x": xp.tolist(), "A": list(witness["A"]), "B": B, "eps": list(witness["eps"]),
            "delta": d.tolist(), "tau": tau}


# ---------------------------------------------------------------- sets only

def _set_extremes(n: int, size: int, oracle: NormOracle, cfg: FamilyConfig, rng):
    """For each ``|S| = size``: max and min of ``||1_{eS}||`` over signs, with the arg signs."""
    sets = list(subsets(n, size, size))
    pats, full = sign_patterns(size, cfg.sign_budget, rng, cfg.random_signs)
    rows = np.concatenate([signed_indicator_rows(n, s, pats) for s in sets])
    vals = chunked_norms(oracle, rows).reshape(len(sets), -1)
    return sets, pats, vals, full


def _estimate_sets(kind: str, m: int, oracle: NormOracle, cfg: FamilyConfig) -> ConstantEstimate:
    n = cfg.dim
    _check(m, None, oracle, n)
    rng = rng_for(cfg.seed, kind, m)
    best = _Best()
    best.offer(1.0, lambda: {"A": [], "B": [], "eps": [], "delta": [], "n": n})
    exhaustive = True
    for size in range(1, min(m, n) + 1):
        sets, pats, vals, full = _set_extremes(n, size, oracle, cfg, rng)
        exhaustive = exhaustive and full
        top, bot = vals.max(axis=1), vals.min(axis=1)
        if kind == "mu":
            ib, ia = int(np.argmax(top)), int(np.argmin(bot))
            cand = [(top[ib] / bot[ia], ia, ib)]
        else:
            cand = []
            for ib, B in enumerate(sets):
                ok = [ia for ia, A in enumerate(sets) if min(A) > max(B)]
                if ok:
                    ia = min(ok, key=lambda j: (bot[j], j))
                    cand.append((top[ib] / bot[ia], ia, ib))
            if not cand:
                continue
            cand = [max(cand, key=lambda c: c[0])]
        v, ia, ib = cand[0]
        best.offer(v, lambda ia=ia, ib=ib: {
            "A": list(sets[ia]), "B": list(sets[ib]), "n": n,
            "eps": pats[int(np.argmin(vals[ia]))].tolist(), "delta": pats[int(np.argmax(vals[ib]))].tolist()})
    family = {"config": cfg.to_json(), "enumeration": "all sets and signs up to size m"}
    return ConstantEstimate(kind, m, None, best.value, best.witness, analytic_constant(kind, m, None, oracle),
                            family, cfg.seed, exhaustive)


def estimate_mu(m, oracle, family: FamilyConfig | None = None) -> ConstantEstimate:
    return _estimate_sets("mu", m, oracle, family or FamilyConfig())


def estimate_psi(m, oracle, family: FamilyConfig | None = None) -> ConstantEstimate:
    return _estimate_sets("psi", m, oracle, family or FamilyConfig())


def fundamental_function(k: int, oracle: NormOracle, family: FamilyConfig | None = None) -> ConstantEstimate:
    """``sup ||1_{eA}||`` over ``|A| = k`` inside the family's dimension (exact when signs are exhaustive)."""
    cfg = family or FamilyConfig()
    n = cfg.dim
    if not 0 <= k <= n:
        raise DomainError(f"size {k} outside 0..{n}")
    if k == 0:
        return ConstantEstimate("fundamental", 0, None, 0.0, {"A": [], "eps": [], "n": n},
                                analytic_constant("fundamental", 0, None, oracle), {"config": cfg.to_json()}, cfg.seed)
    sets, pats, vals, full = _set_extremes(n, k, oracle, cfg, rng_for(cfg.seed, "fundamental", k))
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    return ConstantEstimate("fundamental", k, None, float(vals[i, j]),
                            {"A": list(sets[i]), "eps": pats[j].tolist(), "n": n},
                            analytic_constant("fundamental", k, None, oracle), {"config": cfg.to_json()},
                            cfg.seed, full)


# ---------------------------------------------------------------- projections

def base_x_family(cfg: FamilyConfig, sup: float, label) -> np.ndarray:
    """Grid plus random vectors on all coordinates, zero vector dropped."""
    rng = rng_for(cfg.seed, "x-family", label)
    X = x_candidates(cfg.dim, tuple(range(1, cfg.dim + 1)), sup, cfg, rng, cfg.random_x)
    return X[np.any(X != 0, axis=1)]


def _estimate_proj(kind: str, m: int, oracle: NormOracle, cfg: FamilyConfig, extra) -> ConstantEstimate:
    n = cfg.dim
    _check(m, None, oracle, n)
    X = base_x_family(cfg, 1.0, kind)
    if extra:
        X = np.vstack([X, np.asarray([w["x"] for w in extra], float)])
    sets = list(subsets(n, m))
    masks = np.zeros((len(sets), n))
    for r, s in enumerate(sets):
        masks[r, np.asarray(s, int) - 1] = 1.0
    if kind == "k_c":
        masks = 1.0 - masks
    norms = chunked_norms(oracle, X)
    best = _Best()
    for lo in range(0, X.shape[0], 2000):
        Xc = X[lo:lo + 2000]
        vals = chunked_norms(oracle, (Xc[:, None, :] * masks[None]).reshape(-1, n)).reshape(Xc.shape[0], -1)
        ratio = vals / norms[lo:lo + 2000, None]
        i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        best.offer(ratio[i, j], lambda i=i, j=j, Xc=Xc: {"x": Xc[i].tolist(), "A": list(sets[j])})
    family = {"config": cfg.to_json(), "candidates": int(X.shape[0]), "sets": len(sets)}
    return ConstantEstimate(kind, m, None, best.value, best.witness, analytic_constant(kind, m, None, oracle),
                            family, cfg.seed, False)


def estimate_k(m, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _estimate_proj("k", m, oracle, family or FamilyConfig(), extra)


def estimate_k_c(m, oracle, family: FamilyConfig | None = None, extra=None) -> ConstantEstimate:
    return _estimate_proj("k_c", m, oracle, family or FamilyConfig(), extra)


def _estimate_greedy(kind: str, m: int, tau: float, oracle: NormOracle, cfg: FamilyConfig,
                     extra, exact_order: bool = False) -> ConstantEstimate:
    """Sup over greedy sets of every order ``k <= m``, or only ``k = m`` when ``exact_order``."""
    n = cfg.dim
    _check(m, tau, oracle, n)
    X = base_x_family(cfg, 1.0, kind)
    if extra:
        X = np.vstack([X, np.asarray([w["x"] for w in extra], float)])
    norms = chunked_norms(oracle, X)
    rows, owners, sets = [], [], []
    for r, x in enumerate(X):
        for k in range(m if exact_order else 0, min(m, n) + 1):
            for s in iter_weak_greedy_sets(x, k, tau):
                row = np.zeros(n) if kind == "g" else x.copy()
                idx = list(s)
                if kind == "g":
                    row[idx] = x[idx]
                else:
                    row[idx] = 0.0
                rows.append(row)
                owners.append(r)
                sets.append(tuple(sorted(i + 1 for i in s)))
    vals = chunked_norms(oracle, np.asarray(rows)) / norms[np.asarray(owners)]
    i = int(np.argmax(vals))
    witness = {"x": X[owners[i]].tolist(), "A": list(sets[i]), "tau": tau}
    family = {"config": cfg.to_json(), "candidates": int(X.shape[0]), "greedy_sets": len(rows),
              "exact_order": exact_order}
    return ConstantEstimate(kind, m, tau, float(vals[i]), witness, analytic_constant(kind, m, tau, oracle),
                            family, cfg.seed, False)


def estimate_g(m, tau, oracle, family: FamilyConfig | None = None, extra=None,
               exact_order: bool = False) -> ConstantEstimate:
    return _estimate_greedy("g", m, tau, oracle, family or FamilyConfig(), extra, exact_order)


def estimate_g_c(m, tau, oracle, family: FamilyConfig | None = None, extra=None,
               exact_order: bool = False) -> ConstantEstimate:
    return _estimate_greedy("g_c", m, tau, oracle, family or FamilyConfig(), extra, exact_order)


def estimate(kind: str, m: int, tau: float | None, oracle: NormOracle,
             family: FamilyConfig | None = None) -> ConstantEstimate:
    """Dispatch by kind name."""
    if kind in NU_KINDS + OMEGA_KINDS:
        return _search_pairs(kind, m, tau, oracle, family or FamilyConfig(), None, kind)
    if kind in SET_KINDS:
        return _estimate_sets(kind, m, oracle, family or FamilyConfig())
    if kind in PROJ_KINDS:
        return _estimate_proj(kind, m, oracle, family or FamilyConfig(), None)
    if kind in GREEDY_KINDS:
        return _estimate_greedy(kind, m, tau, oracle, family or FamilyConfig(), None)
    if kind == "fundamental":
        return fundamental_function(m, oracle, family)
    raise DomainError(f"unknown kind {kind!r}")
