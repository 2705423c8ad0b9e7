"""Seeded instance generators for the pointwise checks."""

from __future__ import annotations

import numpy as np

LATTICE = np.array([0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0])


def sample_x(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Mixture of tie-heavy lattice vectors, Gaussians, sparse and geometrically decaying vectors."""
    out = np.zeros((count, n))
    kind = np.arange(count) % 4
    for i in range(count):
        k = kind[i]
        if k == 0:
            out[i] = rng.choice(LATTICE, size=n)
        elif k == 1:
            out[i] = rng.normal(size=n)
        elif k == 2:
            mask = rng.random(n) < rng.uniform(0.2, 0.9)
            out[i] = rng.uniform(-1, 1, size=n) * mask
        else:
            r = rng.uniform(0.3, 1.0)
            out[i] = rng.permutation(r ** np.arange(n)) * rng.choice((1.0, -1.0), size=n)
        if not out[i].any():
            out[i, rng.integers(n)] = 1.0
    return out


def random_subset(rng: np.random.Generator, pool, size: int) -> list[int]:
    pool = list(pool)
    if size > len(pool):
        raise ValueError("subset larger than pool")
    return sorted(int(v) for v in rng.choice(pool, size=size, replace=False)) if size else []


def signs(rng: np.random.Generator, k: int) -> list[float]:
    return [float(s) for s in rng.choice((1.0, -1.0), size=k)]


def bounded_vector(rng: np.random.Generator, n: int, positions, sup: float) -> np.ndarray:
    """Vector on ``positions`` with ``||x||_inf <= sup``; sometimes hits the bound exactly."""
    x = np.zeros(n)
    pos = np.asarray(list(positions), int) - 1
    if pos.size == 0:
        return x
    style = rng.integers(3)
    if style == 0:
        x[pos] = rng.uniform(-sup, sup, size=pos.size)
    elif style == 1:
        x[pos] = sup * rng.choice((1.0, -1.0, 0.5, -0.5, 0.0), size=pos.size)
    else:
        x[pos] = rng.uniform(-sup, sup, size=pos.size) * (rng.random(pos.size) < 0.5)
        x[pos[rng.integers(pos.size)]] = sup * rng.choice((1.0, -1.0))
    return x


def nu_instance(rng: np.random.Generator, n: int, m: int, tau: float, kind: str = "nu") -> dict:
    """Random admissible witness for ``nu``, ``nu_left`` or ``nu_left_prime`` inside ``{1..n}``."""
    idx = list(range(1, n + 1))
    while True:
        a = int(rng.integers(1, m + 1))
        if kind == "nu":
            b = int(rng.integers(0, a + 1))
            A = random_subset(rng, idx, a)
            B = random_subset(rng, [i for i in idx if i not in A], b)
            free = [i for i in idx if i not in A and i not in B]
        elif kind == "nu_left":
            if 2 * a > n:
                continue
            AB = random_subset(rng, idx, 2 * a)
            B, A = AB[:a], AB[a:]
            free = [i for i in idx if i not in AB]
        else:
            b = int(rng.integers(0, a + 1))
            B = random_subset(rng, range(1, m + 1), b) if b else []
            lo = max(B) if B else 0
            rest = [i for i in idx if i > lo]
            if len(rest) < a:
                continue
            A = random_subset(rng, rest, a)
            free = [i for i in rest if i not in A]
        break
    x = bounded_vector(rng, n, free, 1.0 / tau)
    return {"x": x.tolist(), "A": A, "B": B, "eps": signs(rng, len(A)), "delta": signs(rng, len(B))}
