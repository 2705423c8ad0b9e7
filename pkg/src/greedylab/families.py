"""Candidate generators shared by the constant and Lebesgue estimators.

A family is described by a :class:`FamilyConfig`; together with the seed it
fully determines every candidate, so estimates are reproducible.  Candidates
for the free vector ``x`` are the zero vector, a sign-and-magnitude grid on
small supports, and seeded random vectors normalised to the sup-norm bound.
"""

from __future__ import annotations

import functools
import itertools
import zlib
from dataclasses import asdict, dataclass

import numpy as np

from .normed_space import DomainError

CHUNK_ROWS = 250_000


@dataclass(frozen=True)
class FamilyConfig:
    dim: int = 6
    magnitudes: tuple[float, ...] = (1.0, 0.5, 0.25)
    grid_support: int = 3
    random_per_pair: int = 4
    random_x: int = 300
    sign_budget: int = 20
    random_signs: int = 64
    max_pairs: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("family dimension must be positive")

    def to_json(self) -> dict:
        out = asdict(self)
        out["magnitudes"] = list(self.magnitudes)
        return out


def rng_for(seed: int, *labels) -> np.random.Generator:
    """Independent generator per (seed, label...) so checks do not share streams."""
    keys = [int(seed) & 0xFFFFFFFF] + [zlib.crc32(str(lab).encode()) for lab in labels]
    return np.random.default_rng(np.random.SeedSequence(keys))


def sign_patterns(k: int, budget: int, rng: np.random.Generator | None = None,
                  samples: int = 64) -> tuple[np.ndarray, bool]:
    """All ``2^k`` sign vectors when ``k <= budget``, otherwise ``samples`` random ones."""
    if k == 0:
        return np.ones((1, 0)), True
    if k <= budget:
        return np.array(list(itertools.product((1.0, -1.0), repeat=k))), True
    if rng is None:
        raise DomainError("random signs need a generator")
    pats = rng.choice((1.0, -1.0), size=(samples, k))
    pats[0] = 1.0
    return pats, False


def signed_indicator_rows(n: int, idx: tuple[int, ...], signs: np.ndarray) -> np.ndarray:
    """Rows ``1_{eps S}`` (dense, length ``n``) for every sign row; ``idx`` 1-based."""
    rows = np.zeros((signs.shape[0], n))
    if idx:
        rows[:, np.asarray(idx) - 1] = signs
    return rows


@functools.lru_cache(maxsize=512)
def grid_rows(n: int, positions: tuple[int, ...], scale: float, mags: tuple[float, ...],
              max_support: int) -> np.ndarray:
    """Vectors supported on at most ``max_support`` of ``positions`` with entries ``+-scale*mag``."""
    values = np.array(sorted({s * scale * g for g in mags for s in (1.0, -1.0)}, reverse=True))
    blocks = [np.zeros((1, n))]
    for size in range(1, min(max_support, len(positions)) + 1):
        combos = list(itertools.combinations(positions, size))
        vals = np.array(list(itertools.product(values, repeat=size)))
        block = np.zeros((len(combos) * len(vals), n))
        r = 0
        for c in combos:
            cols = np.asarray(c) - 1
            block[r:r + len(vals), cols] = vals
            r += len(vals)
        blocks.append(block)
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def random_rows(n: int, positions: tuple[int, ...], count: int, sup: float,
                rng: np.random.Generator) -> np.ndarray:
    """Random vectors on ``positions`` with sup-norm exactly ``sup``."""
    if not positions or count <= 0:
        return np.zeros((0, n))
    cols = np.asarray(positions) - 1
    vals = rng.uniform(-sup, sup, size=(count, cols.size))
    # sparsify some rows so flat-plus-spike shapes appear
    keep = rng.random((count, cols.size)) < rng.uniform(0.3, 1.0, size=(count, 1))
    vals *= keep
    spike = rng.integers(0, cols.size, size=count)
    vals[np.arange(count), spike] = sup * rng.choice((1.0, -1.0), size=count)
    out = np.zeros((count, n))
    out[:, cols] = vals
    return out


def x_candidates(n: int, positions: tuple[int, ...], sup: float, cfg: FamilyConfig,
                 rng: np.random.Generator, random_count: int | None = None) -> np.ndarray:
    grid = grid_rows(n, tuple(positions), float(sup), tuple(cfg.magnitudes), cfg.grid_support)
    count = cfg.random_per_pair if random_count is None else random_count
    return np.vstack([grid, random_rows(n, tuple(positions), count, sup, rng)])


def subsets(n: int, max_size: int, min_size: int = 0):
    """Every subset of ``{1..n}`` with size in ``[min_size, max_size]``, by size then lexicographically."""
    for k in range(min_size, min(max_size, n) + 1):
        yield from itertools.combinations(range(1, n + 1), k)


def chunked_norms(oracle, rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= CHUNK_ROWS:
        return oracle.many(rows)
    return np.concatenate([oracle.many(rows[i:i + CHUNK_ROWS]) for i in range(0, rows.shape[0], CHUNK_ROWS)])


def limit_pairs(pairs: list, cfg: FamilyConfig, rng: np.random.Generator) -> tuple[list, bool]:
    """Keep every pair, or a seeded sample of ``cfg.max_pairs`` of them."""
    if cfg.max_pairs is None or len(pairs) <= cfg.max_pairs:
        return pairs, True
    pick = np.sort(rng.choice(len(pairs), size=cfg.max_pairs, replace=False))
    return [pairs[i] for i in pick], False
