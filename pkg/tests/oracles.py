"""Independent reference computations used to freeze expected values.

Everything here is written from the definitions with plain loops and
itertools, sharing no code with the package.
"""

from __future__ import annotations

import itertools
import math


def lp(x, p):
    if p == math.inf:
        return max((abs(v) for v in x), default=0.0)
    return sum(abs(v) ** p for v in x) ** (1.0 / p)


def is_weak_greedy(x, S, tau):
    """``S`` (0-based) is tau-weak greedy iff min over S >= tau * max outside S."""
    inside = [abs(x[i]) for i in S]
    outside = [abs(x[i]) for i in range(len(x)) if i not in S]
    if not inside or not outside:
        return True
    return min(inside) >= tau * max(outside)


def weak_greedy_sets(x, m, tau):
    return [S for S in itertools.combinations(range(len(x)), m) if is_weak_greedy(x, S, tau)]


def gamma(x, m, tau, p):
    return max(lp([0.0 if i in S else v for i, v in enumerate(x)], p) for S in weak_greedy_sets(x, m, tau))


def sigma_lp(x, m, p):
    """For a lattice norm the best m-term error removes the m largest entries."""
    mags = sorted((abs(v) for v in x), reverse=True)
    return lp(mags[m:], p)


def sigma_tilde(x, m, p):
    return min(lp([0.0 if i in S else v for i, v in enumerate(x)], p)
               for S in itertools.combinations(range(len(x)), m))


def sigma_hat(x, m, p):
    return min(lp(x[k:], p) for k in range(m + 1))


def nu_l2_bruteforce(m, tau, n, grid=(0.0, 0.5, 1.0)):
    """``nu_{m,tau}`` on l2 by enumeration of disjoint A, B and x on a small grid (sup <= 1/tau)."""
    best = 0.0
    for a in range(1, m + 1):
        for b in range(0, a + 1):
            for A in itertools.combinations(range(n), a):
                rest = [i for i in range(n) if i not in A]
                for B in itertools.combinations(rest, b):
                    free = [i for i in rest if i not in B][:2]
                    for vals in itertools.product([g / tau for g in grid] + [-g / tau for g in grid[1:]],
                                                  repeat=len(free)):
                        xx = dict(zip(free, vals))
                        num = math.sqrt(sum((tau * v) ** 2 for v in xx.values()) + b)
                        den = math.sqrt(sum(v * v for v in xx.values()) + a)
                        best = max(best, num / den)
    return best


def t(n):
    return 1.0 / math.sqrt(n)


def first_block():
    """``N_1`` and ``b_1`` from the recursion, with the sum taken term by term."""
    a1 = 1.0 / math.log(2.0)
    L1 = math.exp(math.log(1.0) ** 2)
    n = 11  # N_1 > 10 N_0 = 0 and the growth condition N_1 > 10
    while True:
        b = a1 * t(1) / math.fsum(t(k) for k in range(1, n + 1))
        if b < a1 / L1:
            return n, b
        n += 1


def harmonic_log_sum(k, K):
    return math.fsum(1.0 / (n * math.log(n + 1)) for n in range(k + 1, K + 1))
