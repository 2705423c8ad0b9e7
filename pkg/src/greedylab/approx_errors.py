"""Best m-term / projection errors and the Chebyshev weak greedy error.

The generic convex solver is derivative free: cyclic line searches (golden
section) along coordinate directions, plus pairwise diagonal directions which
unstick the iteration at kinks of max-type norms.  When the oracle is known to
be suppression 1-unconditional the projection coefficients are optimal and the
solver is bypassed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .greedy_engine import DEFAULT_CAP, EnumerationCapWarning, iter_weak_greedy_sets, residual_rows
from .normed_space import CoeffVector, DomainError, NormOracle, _as_array

INV_PHI = (math.sqrt(5) - 1) / 2
DEFAULT_BUDGET = 200_000


class BudgetError(DomainError):
    """Raised when exhaustive support enumeration would exceed its budget."""


@dataclass
class BestApproxResult:
    support: tuple[int, ...]
    coeffs: tuple[float, ...]
    value: float
    solver_iterations: int = 0
    converged: bool = True

    def to_json(self) -> dict:
        return {"support": list(self.support), "coeffs": list(self.coeffs), "value": self.value,
                "solver_iterations": self.solver_iterations, "converged": self.converged}


def golden_section(f, lo: float, hi: float, xtol: float, max_evals: int = 200):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(argmin, min)``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > xtol and evals < max_evals:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc) if fc <= fd else (d, fd)


def _descent(x: np.ndarray, idx: np.ndarray, start: np.ndarray, oracle: NormOracle, tol: float,
             max_iters: int, unit_norms: np.ndarray):
    coeffs = start.astype(float).copy()
    row = x[None, :].copy()
    batch = oracle.batch

    def value(c: np.ndarray) -> float:
        row[0, idx] = x[idx] - c
        return float(batch(row)[0])

    k = idx.size
    dirs = [np.eye(k)[i] for i in range(k)]
    if 2 <= k <= 6:
        for i, j in itertools.combinations(range(k), 2):
            for s in (1.0, -1.0):
                d = np.zeros(k)
                d[i], d[j] = 1.0, s
                dirs.append(d / math.sqrt(2))
    dir_scale = [max(float(np.min(unit_norms[np.abs(d) > 0])) * float(np.max(np.abs(d))), 1e-300)
                 for d in dirs]

    current = value(coeffs)
    cycles = 0
    converged = False
    while cycles < max_iters:
        cycles += 1
        before = current
        for d, scale in zip(dirs, dir_scale):
            if current == 0.0:
                break
            # minimiser along d lies within 2*current/|d|-scaled radius (triangle inequality)
            radius = 2.0 * current / scale
            xtol = 1e-3 * tol * (1.0 + current) / scale
            t_best, f_best = golden_section(lambda t: value(coeffs + t * d), -radius, radius, xtol)
            if f_best < current:
                coeffs = coeffs + t_best * d
                current = f_best
        if before - current < tol * (1.0 + current):
            converged = True
            break
    return coeffs, current, cycles, converged


def best_coeffs_on_support(x: CoeffVector | np.ndarray, support, oracle: NormOracle, tol: float = 1e-9,
                           max_iters: int = 10_000, method: str = "auto") -> BestApproxResult:
    """Minimise ``||x - sum_{n in support} a_n e_n||`` over the coefficients ``a``.

    ``method`` is ``"auto"`` (closed form when the oracle is suppression
    1-unconditional), ``"closed"`` or ``"descent"``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    arr = _as_array(x)
    supp = tuple(sorted(set(int(i) for i in support)))
    if supp and (supp[0] < 1 or supp[-1] > arr.size):
        raise DomainError("support outside the ambient dimension")
    idx = np.asarray(supp, dtype=int) - 1
    if not supp:
        return BestApproxResult((), (), float(oracle.many(arr[None, :])[0]))
    if method == "closed" or (method == "auto" and oracle.suppression_unconditional):
        row = arr.copy()
        row[idx] = 0.0
        return BestApproxResult(supp, tuple(float(v) for v in arr[idx]), float(oracle.many(row[None, :])[0]))
    if method not in ("auto", "descent"):
        raise DomainError(f"unknown method {method!r}")

    eye = np.zeros((idx.size, arr.size))
    eye[np.arange(idx.size), idx] = 1.0
    unit_norms = oracle.many(eye)
    best_coeffs, best_val = None, math.inf
    total_cycles, all_ok = 0, True
    for start in (arr[idx], np.zeros(idx.size)):
        coeffs, val, cycles, ok = _descent(arr, idx, start, oracle, tol, max_iters, unit_norms)
        total_cycles += cycles
        all_ok = all_ok and ok
        if val < best_val:
            best_coeffs, best_val = coeffs, val
    return BestApproxResult(supp, tuple(float(c) for c in best_coeffs), float(best_val), total_cycles, all_ok)


def _supports(n: int, m: int, budget: int):
    size = min(m, n)
    count = math.comb(n, size)
    if count > budget:
        raise BudgetError(f"C({n},{size}) = {count} supports exceed the budget {budget}; "
                          "lower the ambient dimension or the order m")
    return itertools.combinations(range(n), size)


def best_m_term(x: CoeffVector | np.ndarray, m: int, oracle: NormOracle, tol: float = 1e-9,
                budget: int = DEFAULT_BUDGET) -> BestApproxResult:
    """The minimiser behind ``sigma_m``; ties broken by lexicographic support."""
    arr = _as_array(x)
    n = arr.size
    if not 0 <= m <= n:
        raise DomainError(f"order m={m} outside 0..{n}")
    if m == 0:
        return BestApproxResult((), (), float(oracle.many(arr[None, :])[0]))
    nonzero = np.flatnonzero(arr)
    if nonzero.size <= m:
        return BestApproxResult(tuple(int(i) + 1 for i in nonzero), tuple(float(v) for v in arr[nonzero]), 0.0)
    supports = list(_supports(n, m, budget))
    if oracle.suppression_unconditional:
        vals = oracle.many(residual_rows(arr, supports))
        k = int(np.argmin(vals))
        s = supports[k]
        return BestApproxResult(tuple(i + 1 for i in s), tuple(float(arr[i]) for i in s), float(vals[k]))
    best = None
    for s in supports:
        res = best_coeffs_on_support(arr, [i + 1 for i in s], oracle, tol)
        if best is None or res.value < best.value:
            best = res
    return best


def sigma_m(x: CoeffVector | np.ndarray, m: int, oracle: NormOracle, tol: float = 1e-9,
            budget: int = DEFAULT_BUDGET) -> float:
    return best_m_term(x, m, oracle, tol, budget).value


def sigma_tilde_m(x: CoeffVector | np.ndarray, m: int, oracle: NormOracle,
                  budget: int = DEFAULT_BUDGET) -> float:
    arr = _as_array(x)
    n = arr.size
    if not 0 <= m <= n:
        raise DomainError(f"order m={m} outside 0..{n}")
    if m == 0:
        return float(oracle.many(arr[None, :])[0])
    return float(oracle.many(residual_rows(arr, list(_supports(n, m, budget)))).min())


def sigma_hat_m(x: CoeffVector | np.ndarray, m: int, oracle: NormOracle) -> float:
    if m < 0:
        raise DomainError("order must be >= 0")
    arr = _as_array(x)
    k = min(m, arr.size)
    rows = np.repeat(arr[None, :], k + 1, axis=0)
    for r in range(1, k + 1):
        rows[r, :r] = 0.0
    return float(oracle.many(rows).min())


@dataclass
class ChebyshevOutcome:
    value: float
    support: tuple[int, ...]
    result: BestApproxResult
    truncated: bool = False
    all_converged: bool = True
    per_set: list = field(default_factory=list)


def chebyshev_worst(x: CoeffVector | np.ndarray, m: int, tau: float, oracle: NormOracle, tol: float = 1e-9,
                    cap: int = DEFAULT_CAP) -> ChebyshevOutcome:
    """Largest Chebyshev error over every tau-weak greedy set of order ``m``."""
    import warnings

    if not 0 < tau <= 1:
        raise DomainError(f"tau must lie in (0, 1], got {tau}")
    arr = _as_array(x)
    if not 0 <= m <= arr.size:
        raise DomainError(f"order m={m} outside 0..{arr.size}")
    out = None
    truncated = False
    all_ok = True
    for count, s in enumerate(iter_weak_greedy_sets(arr, m, tau)):
        if count >= cap:
            truncated = True
            warnings.warn(f"Chebyshev enumeration truncated at cap={cap}", EnumerationCapWarning, stacklevel=2)
            break
        res = best_coeffs_on_support(arr, [i + 1 for i in s], oracle, tol)
        all_ok = all_ok and res.converged
        if out is None or res.value > out.value or (res.value == out.value and res.support < out.support):
            out = ChebyshevOutcome(res.value, res.support, res)
    out.truncated = truncated
    out.all_converged = all_ok
    return out


def chebyshev_residual(x: CoeffVector | np.ndarray, m: int, tau: float, oracle: NormOracle,
                       tol: float = 1e-9, cap: int = DEFAULT_CAP) -> float:
    return chebyshev_worst(x, m, tau, oracle, tol, cap).value
