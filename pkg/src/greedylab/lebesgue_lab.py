"""Lower-bound estimators for the Lebesgue-type parameters of the weak greedy algorithm.

All five kinds share the numerator ``gamma_{m,tau}(x)`` (for ``L_ch`` the
worst Chebyshev error) and differ in the comparison quantity:

``L``         ``sigma_m(x)``
``L_tilde``   ``sigma~_m(x)`` (projections only)
``L_re``      ``||x - S_m x||``
``L_hat_re``  ``sigma^_m(x) = min_{k <= m} ||x - S_k x||``
``L_ch``      ``sigma_m(x)`` with the Chebyshev error on top

The ``*_witness`` helpers build the vectors used in the lower-bound halves of
the main results; each returns the vector together with the quantities its
construction controls, so callers can verify the construction pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approx_errors import best_coeffs_on_support, chebyshev_worst, sigma_hat_m, sigma_m, sigma_tilde_m
from .constants_lab import base_x_family
from .families import FamilyConfig
from .greedy_engine import worst_greedy_set
from .normed_space import DomainError, NormOracle, _as_array, indicator

KINDS = ("L", "L_tilde", "L_re", "L_hat_re", "L_ch")


@dataclass
class LebesgueEstimate:
    kind: str
    m: int
    tau: float
    lower_bound: float
    witness: dict | None
    family: dict = field(default_factory=dict)
    seed: int = 0
    skipped_zero_denominators: int = 0
    truncated: bool = False
    all_converged: bool = True

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": self.m, "tau": self.tau, "lower_bound": self.lower_bound,
                "witness": self.witness, "family": self.family, "seed": self.seed,
                "skipped_zero_denominators": self.skipped_zero_denominators,
                "truncated": self.truncated, "all_converged": self.all_converged}


def _norm(oracle: NormOracle, v: np.ndarray) -> float:
    return float(oracle.many(np.asarray(v, float)[None, :])[0])


def comparison(kind: str, x: np.ndarray, m: int, oracle: NormOracle, tol: float = 1e-9) -> float:
    """The denominator of a Lebesgue ratio."""
    if kind in ("L", "L_ch"):
        return sigma_m(x, m, oracle, tol)
    if kind == "L_tilde":
        return sigma_tilde_m(x, m, oracle)
    if kind == "L_re":
        r = x.copy()
        r[:m] = 0.0
        return _norm(oracle, r)
    if kind == "L_hat_re":
        return sigma_hat_m(x, m, oracle)
    raise DomainError(f"unknown Lebesgue kind {kind!r}")


def lebesgue_ratio(kind: str, x, m: int, tau: float, oracle: NormOracle, tol: float = 1e-9):
    """``(ratio, numerator, denominator, set, converged, truncated)``; ratio is ``nan`` when both vanish."""
    arr = _as_array(x)
    if not 0 <= m <= arr.size:
        raise DomainError(f"order m={m} outside 0..{arr.size}")
    if kind == "L_ch":
        out = chebyshev_worst(arr, m, tau, oracle, tol)
        num, lam, ok, trunc = out.value, out.support, out.all_converged, out.truncated
    else:
        num, lam, trunc = worst_greedy_set(arr, m, tau, oracle)
        ok = True
    den = comparison(kind, arr, m, oracle, tol)
    if den <= 0:
        return math.nan, num, den, lam, ok, trunc
    return num / den, num, den, lam, ok, trunc


def structured_vectors(m: int, tau: float, n: int) -> list[np.ndarray]:
    """Canonical extremal shapes: ``(1/tau) 1_B + 1_A + 1_C`` with ``B < A < C`` and flat vectors."""
    out = []
    for j in range(1, m + 1):
        z = np.zeros(max(n, j + m))
        z[:j] = 1.0 / tau
        z[j:j + m] = 1.0
        out.append(z)
    k = min(m, n)
    out.append(np.ones(n))
    out.append(np.concatenate([np.ones(k), np.full(n - k, tau)]))
    return out


def estimate_lebesgue(kind: str, m: int, tau: float, oracle: NormOracle, family: FamilyConfig | None = None,
                      extra=None, structured: bool = True, tol: float = 1e-9) -> LebesgueEstimate:
    """Maximise the ``kind`` ratio over the family, the structured shapes and ``extra`` vectors.

    The grid part of the family is used only when the comparison quantity is
    cheap (closed form); otherwise the random vectors and extras are used.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown Lebesgue kind {kind!r}")
    if not 0 < tau <= 1:
        raise DomainError(f"tau must lie in (0, 1], got {tau}")
    cfg = family or FamilyConfig()
    needs_solver = kind in ("L", "L_ch") and not oracle.suppression_unconditional
    if needs_solver:
        from .families import random_rows, rng_for

        X = random_rows(cfg.dim, tuple(range(1, cfg.dim + 1)), cfg.random_x, 1.0,
                        rng_for(cfg.seed, "lebesgue", kind, m, tau))
        vectors = list(X)
    else:
        vectors = list(base_x_family(cfg, 1.0, "lebesgue"))
    if structured:
        vectors += [v for v in structured_vectors(m, tau, cfg.dim)
                    if oracle.max_dim is None or v.size <= oracle.max_dim]
    for e in extra or ():
        vectors.append(np.asarray(e["x"] if isinstance(e, dict) else e, float))
    best_val, best_w = -math.inf, None
    skipped, truncated, converged = 0, False, True
    for x in vectors:
        if x.size < m:
            continue
        ratio, num, den, lam, ok, trunc = lebesgue_ratio(kind, x, m, tau, oracle, tol)
        truncated = truncated or trunc
        converged = converged and ok
        if math.isnan(ratio):
            skipped += 1
            continue
        if ratio > best_val:
            best_val = ratio
            best_w = {"x": x.tolist(), "greedy_set": list(lam), "numerator": num, "denominator": den}
    fam = {"config": cfg.to_json(), "candidates": len(vectors), "grid": not needs_solver,
           "structured": structured, "extra": len(extra or ())}
    return LebesgueEstimate(kind, m, tau, best_val, best_w, fam, cfg.seed, skipped, truncated, converged)


def estimate_L(m, tau, oracle, family=None, extra=None, structured=True) -> LebesgueEstimate:
    return estimate_lebesgue("L", m, tau, oracle, family, extra, structured)


def estimate_L_tilde(m, tau, oracle, family=None, extra=None, structured=True) -> LebesgueEstimate:
    return estimate_lebesgue("L_tilde", m, tau, oracle, family, extra, structured)


def estimate_L_re(m, tau, oracle, family=None, extra=None, structured=True) -> LebesgueEstimate:
    return estimate_lebesgue("L_re", m, tau, oracle, family, extra, structured)


def estimate_L_hat_re(m, tau, oracle, family=None, extra=None, structured=True) -> LebesgueEstimate:
    return estimate_lebesgue("L_hat_re", m, tau, oracle, family, extra, structured)


def estimate_L_ch(m, tau, oracle, family=None, extra=None, structured=True) -> LebesgueEstimate:
    return estimate_lebesgue("L_ch", m, tau, oracle, family, extra, structured)


# ---------------------------------------------------------------- witness constructions

def z_witness(nu_w: dict, m: int, tau: float, oracle: NormOracle) -> dict:
    """``z = 1_{eA} + x + (1/tau) 1_{dB} + 1_C`` with ``C`` after everything and ``|C| = m - |A|``.

    ``A u C`` is tau-weak greedy for ``z``, its residual is ``x + (1/tau) 1_{dB}``,
    and removing ``(1/tau) 1_{dB} + 1_C`` leaves ``x + 1_{eA}``, so
    ``gamma(z) / sigma(z) >= nu ratio / tau`` for ``sigma`` and ``sigma~`` alike.
    """
    x = np.asarray(nu_w["x"], float)
    A, B = list(nu_w["A"]), list(nu_w["B"])
    if len(A) > m:
        raise DomainError("witness set A larger than the order")
    n = x.size
    pad = m - len(A)
    ea = indicator(A, nu_w["eps"], n)
    db = indicator(B, nu_w["delta"], n)
    z = np.concatenate([ea + x + db / tau, np.ones(pad)])
    residual = np.concatenate([x + db / tau, np.zeros(pad)])
    remainder = np.concatenate([x + ea, np.zeros(pad)])
    return {"x": z.tolist(), "m": m, "greedy_set": sorted(A + list(range(n + 1, n + pad + 1))),
            "numerator_lower": _norm(oracle, residual), "denominator_upper": _norm(oracle, remainder),
            "approximant_support": sorted(B + list(range(n + 1, n + pad + 1)))}


def y_witness_left_prime(nu_w: dict, tau: float, oracle: NormOracle) -> dict:
    """``y = (1/tau) 1_{dB} + 1_D + x + 1_{eA}`` with ``D = {1..max B} \\ B``.

    ``D u A`` is tau-weak greedy of order ``m2 = |D u A|`` and
    ``S_{max B} y = 1_D + (1/tau) 1_{dB}``, so the hat-ratio of order ``m2``
    is at least ``||x + (1/tau) 1_{dB}|| / ||x + 1_{eA}||``.
    """
    x = np.asarray(nu_w["x"], float)
    n = x.size
    A, B = list(nu_w["A"]), list(nu_w["B"])
    m1 = max(B) if B else 0
    D = [i for i in range(1, m1 + 1) if i not in B]
    ea = indicator(A, nu_w["eps"], n)
    db = indicator(B, nu_w["delta"], n)
    y = db / tau + indicator(D, None, n) + x + ea
    return {"x": y.tolist(), "m": len(D) + len(A), "greedy_set": sorted(D + A), "partial_sum_order": m1,
            "numerator_lower": _norm(oracle, x + db / tau), "denominator_upper": _norm(oracle, x + ea)}


def kc_witness(kc_w: dict, m: int, oracle: NormOracle) -> dict:
    """``y = x + M 1_{sA} + M 1_C`` (``s = sgn x`` on ``A``, ``M = ||x||_inf``): ratio ``>= ||x - P_A x|| / ||x||``."""
    x = np.asarray(kc_w["x"], float)
    A = list(kc_w["A"])
    n = x.size
    pad = m - len(A)
    M = float(np.max(np.abs(x))) or 1.0
    s = np.where(x >= 0, 1.0, -1.0)
    y = x.copy()
    if A:
        idx = np.asarray(A) - 1
        y[idx] += M * s[idx]
    y = np.concatenate([y, np.full(pad, M)])
    res = x.copy()
    if A:
        res[np.asarray(A) - 1] = 0.0
    return {"x": y.tolist(), "m": m, "greedy_set": sorted(A + list(range(n + 1, n + pad + 1))),
            "numerator_lower": _norm(oracle, np.concatenate([res, np.zeros(pad)])),
            "denominator_upper": _norm(oracle, np.concatenate([x, np.zeros(pad)]))}


def gc_witness(gc_w: dict, m: int, oracle: NormOracle) -> dict:
    """``y = x + a 1_C`` with ``a = min_A |x|`` and ``|C| = m - |A|``: tilde-ratio ``>= ||x - P_A x|| / ||x||``."""
    x = np.asarray(gc_w["x"], float)
    A = list(gc_w["A"])
    n = x.size
    pad = m - len(A)
    if A:
        a = float(np.min(np.abs(x[np.asarray(A) - 1])))
    else:
        a = float(np.max(np.abs(x)))
    a = a or 1.0
    y = np.concatenate([x, np.full(pad, a)])
    res = x.copy()
    if A:
        res[np.asarray(A) - 1] = 0.0
    return {"x": y.tolist(), "m": m, "greedy_set": sorted(A + list(range(n + 1, n + pad + 1))),
            "numerator_lower": _norm(oracle, np.concatenate([res, np.zeros(pad)])),
            "denominator_upper": _norm(oracle, np.concatenate([x, np.zeros(pad)]))}


def psi_witness(psi_w: dict, tau: float, oracle: NormOracle) -> dict:
    """``y = 1_{dB} + 1_D + tau 1_{eA}`` with ``D = {1..max B} \\ B`` and ``B < A``.

    ``D u A`` is tau-weak greedy of order ``max B``, leaving ``1_{dB}``, while
    ``y - S_{max B} y = tau 1_{eA}``.
    """
    A, B = list(psi_w["A"]), list(psi_w["B"])
    if not B:
        raise DomainError("psi witness needs a nonempty B")
    n = max(int(psi_w.get("n", 0)), max(A + B))
    m1 = max(B)
    D = [i for i in range(1, m1 + 1) if i not in B]
    db = indicator(B, psi_w["delta"], n)
    ea = indicator(A, psi_w["eps"], n)
    y = db + indicator(D, None, n) + tau * ea
    return {"x": y.tolist(), "m": m1, "greedy_set": sorted(D + A),
            "numerator_lower": _norm(oracle, db), "denominator_upper": tau * _norm(oracle, ea)}


def chebyshev_witnesses(w: dict, m: int, oracle: NormOracle, tol: float = 1e-9) -> dict:
    """The pair ``y = x - P_A x + a 1_D`` and ``z = x + a 1_D`` (``D`` after ``x``, ``|D| = m``, ``a = min_A |x|``).

    Returns both vectors and the four quantities linked by the construction:
    Chebyshev errors on ``D`` (for ``y``) and on ``A`` (for ``z``), and the
    explicit upper bounds ``||x + a 1_D||`` and ``||x||`` for the ``sigma_m``.
    """
    x = np.asarray(w["x"], float)
    A = sorted(w["A"])
    if len(A) != m:
        raise DomainError("the greedy set must have size m")
    n = x.size
    a = float(np.min(np.abs(x[np.asarray(A) - 1]))) if A else 0.0
    res = x.copy()
    if A:
        res[np.asarray(A) - 1] = 0.0
    y = np.concatenate([res, np.full(m, a)])
    z = np.concatenate([x, np.full(m, a)])
    D = list(range(n + 1, n + m + 1))
    ch_y = best_coeffs_on_support(y, D, oracle, tol).value if m else _norm(oracle, y)
    ch_z = best_coeffs_on_support(z, A, oracle, tol).value if m else _norm(oracle, z)
    return {"y": y.tolist(), "z": z.tolist(), "m": m, "alpha": a, "D": D, "A": A,
            "residual": _norm(oracle, res), "alpha_block": _norm(oracle, np.concatenate([np.zeros(n), np.full(m, a)])),
            "cheb_y": ch_y, "cheb_z": ch_z,
            "sigma_y_upper": _norm(oracle, z), "sigma_z_upper": _norm(oracle, np.concatenate([x, np.zeros(m)]))}
