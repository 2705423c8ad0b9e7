"""Weak greedy sets, projections and the greedy error functional.

Every qualifying set is enumerated rather than one tie-broken choice, because
the error ``gamma_{m,tau}(x)`` is a supremum over *all* tau-greedy operators.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .normed_space import CoeffVector, DomainError, NormOracle, _as_array

DEFAULT_CAP = 10**6


class EnumerationCapWarning(UserWarning):
    """Family enumeration stopped at the cap; results are lower bounds."""


@dataclass(frozen=True)
class WeakGreedyFamily:
    x: CoeffVector
    m: int
    tau: float
    sets: tuple[tuple[int, ...], ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def to_json(self) -> dict:
        return {"x": self.x.tolist(), "m": self.m, "tau": self.tau,
                "sets": [list(s) for s in self.sets], "truncated": self.truncated}


def _check_tau(tau: float) -> None:
    if not 0 < tau <= 1:
        raise DomainError(f"tau must lie in (0, 1], got {tau}")


def is_weak_greedy_set(x: CoeffVector | np.ndarray, lam: Sequence[int], tau: float,
                       tie_tol: float = 0.0) -> bool:
    _check_tau(tau)
    arr = np.abs(_as_array(x))
    n = arr.size
    idx = np.asarray(sorted(set(lam)), dtype=int) - 1
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise DomainError("set contains indices outside the ambient dimension")
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    inside = arr[mask].min() if idx.size else math.inf
    outside = arr[~mask].max() if idx.size < n else 0.0
    return bool(inside >= tau * outside - tie_tol)


def iter_weak_greedy_sets(x: np.ndarray, m: int, tau: float, tie_tol: float = 0.0):
    """Yield every size-``m`` tau-weak greedy set of ``x`` as 0-based index tuples.

    Sort magnitudes descending; a set is determined by the first sorted
    position ``j`` it misses.  It then contains positions ``0..j-1`` and
    ``m - j`` further positions ``> j`` whose magnitude is at least
    ``tau * |x|_(j)``.  Each set is produced exactly once.
    """
    mags = np.abs(x)
    n = mags.size
    order = np.argsort(-mags, kind="stable")
    sorted_mags = mags[order]
    if m == n:
        yield tuple(range(n))
        return
    for j in range(0, m + 1):
        need = m - j
        head = order[:j]
        floor = tau * sorted_mags[j] - tie_tol
        pool = [int(order[k]) for k in range(j + 1, n) if sorted_mags[k] >= floor]
        if len(pool) < need:
            continue
        for extra in itertools.combinations(pool, need):
            yield tuple(int(i) for i in head) + extra


def weak_greedy_sets(x: CoeffVector | np.ndarray, m: int, tau: float, cap: int = DEFAULT_CAP,
                     tie_tol: float = 0.0) -> WeakGreedyFamily:
    _check_tau(tau)
    vec = x if isinstance(x, CoeffVector) else CoeffVector(x)
    n = vec.ambient_dim
    if not 0 <= m <= n:
        raise DomainError(f"order m={m} outside 0..{n}")
    found = []
    truncated = False
    for s in iter_weak_greedy_sets(vec.values, m, tau, tie_tol):
        if len(found) >= cap:
            truncated = True
            break
        found.append(tuple(sorted(i + 1 for i in s)))
    if truncated:
        warnings.warn(f"weak greedy family of order {m} truncated at cap={cap}", EnumerationCapWarning,
                      stacklevel=2)
    found.sort()
    return WeakGreedyFamily(vec, m, float(tau), tuple(found), truncated)


def project(x: CoeffVector | np.ndarray, a: Sequence[int]) -> CoeffVector:
    arr = _as_array(x)
    out = np.zeros_like(arr)
    idx = [i - 1 for i in a if 1 <= i <= arr.size]
    out[idx] = arr[idx]
    return CoeffVector(out)


def partial_sum(x: CoeffVector | np.ndarray, m: int) -> CoeffVector:
    if m < 0:
        raise DomainError("partial sum order must be >= 0")
    arr = _as_array(x).copy()
    arr[m:] = 0.0
    return CoeffVector(arr)


def residual_rows(x: np.ndarray, sets_0based: Sequence[Sequence[int]]) -> np.ndarray:
    """Rows ``x - P_S x`` for each set ``S`` (0-based indices)."""
    rows = np.repeat(x[None, :], max(len(sets_0based), 1), axis=0)
    for r, s in enumerate(sets_0based):
        if len(s):
            rows[r, list(s)] = 0.0
    return rows


def worst_greedy_set(x: CoeffVector | np.ndarray, m: int, tau: float, oracle: NormOracle,
                     cap: int = DEFAULT_CAP, tie_tol: float = 0.0):
    """Return ``(gamma_{m,tau}(x), maximising set (1-based), truncated)``."""
    _check_tau(tau)
    arr = _as_array(x)
    if not 0 <= m <= arr.size:
        raise DomainError(f"order m={m} outside 0..{arr.size}")
    sets = []
    truncated = False
    for s in iter_weak_greedy_sets(arr, m, tau, tie_tol):
        if len(sets) >= cap:
            truncated = True
            warnings.warn(f"greedy residual enumeration truncated at cap={cap}", EnumerationCapWarning,
                          stacklevel=2)
            break
        sets.append(s)
    vals = oracle.many(residual_rows(arr, sets))
    best = int(np.argmax(vals))
    return float(vals[best]), tuple(sorted(i + 1 for i in sets[best])), truncated


def greedy_residual(x: CoeffVector | np.ndarray, m: int, tau: float, oracle: NormOracle,
                    cap: int = DEFAULT_CAP) -> float:
    return worst_greedy_set(x, m, tau, oracle, cap)[0]


def truncate(x: CoeffVector | np.ndarray, alpha: float) -> CoeffVector:
    """Clamp every coefficient modulus at ``alpha``, keeping signs."""
    if not alpha > 0:
        raise DomainError("truncation level must be positive")
    arr = _as_array(x)
    return CoeffVector(np.clip(arr, -alpha, alpha))


def threshold(x: CoeffVector | np.ndarray, eps: float) -> CoeffVector:
    """Keep exactly the coefficients with modulus strictly above ``eps``."""
    if not eps > 0:
        raise DomainError("threshold must be positive")
    arr = _as_array(x)
    return CoeffVector(np.where(np.abs(arr) > eps, arr, 0.0))
