"""A weighted-tail space whose unit vector basis has uniform property (A)
but is not quasi-greedy.

The weights are built block by block.  Block ``j`` starts with the weight
``t_j`` and continues with the ``N_j`` weights ``t_{N_{j-1}+1}, ...,
t_{N_{j-1}+N_j}``.  ``N_j`` grows at least tenfold per block, so everything
here is done on a compressed representation: a block is described by its
lead coefficient, a constant tail coefficient and its length, and norms are
evaluated from per-block aggregates.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .normed_space import DomainError, NormOracle, make_weighted_tail_norm

EXACT_SUM_LIMIT = 10**6  # ranges shorter than this (starting below 1000) are summed term by term
DENSE_BUDGET = 2_000_000
FLOAT_CEILING = 1e290


def t(n: float) -> float:
    return 1.0 / math.sqrt(n)


def L(n: float) -> float:
    return math.exp(math.log(n) ** 2)


def a(n: float) -> float:
    return 1.0 / (math.sqrt(n) * math.log(n + 1))


def sum_t(lo: int, hi: int) -> float:
    """``sum_{n=lo}^{hi} n^{-1/2}`` for integers ``1 <= lo <= hi`` (0 for an empty range).

    Short ranges near the origin use compensated summation.  Everything else uses
    the midpoint Euler-Maclaurin expansion up to the third derivative; for
    ``lo >= 1000`` the neglected term is below ``1e-19`` so the result carries
    full floating relative precision.
    """
    if hi < lo:
        return 0.0
    if lo < 1:
        raise DomainError("summation range must start at 1 or later")
    if lo < 1000 and hi - lo < EXACT_SUM_LIMIT:
        return math.fsum(1.0 / math.sqrt(n) for n in range(lo, hi + 1))
    if lo < 1000:
        return math.fsum(1.0 / math.sqrt(n) for n in range(lo, 1000)) + sum_t(1000, hi)
    A, B = float(lo) - 0.5, float(hi) + 0.5
    # 2(sqrt(B) - sqrt(A)) written without cancellation
    main = 2.0 * float(hi - lo + 1) / (math.sqrt(B) + math.sqrt(A))
    first = (B ** -1.5 - A ** -1.5) / 48.0
    third = -(105.0 / 46080.0) * (B ** -3.5 - A ** -3.5)
    return main + first + third


@dataclass(frozen=True)
class WeightSequence:
    """Constructed prefix of the weight sequence.

    ``N[j-1]`` and ``b[j-1]`` hold ``N_j`` and ``b_j``; ``block_sums[j-1]`` is
    the sum of the ``N_j`` tail weights of block ``j``.  ``J_max_reached`` is
    set when construction stopped early because ``N_j`` left floating range.
    """

    N: tuple[int, ...]
    b: tuple[float, ...]
    block_sums: tuple[float, ...]
    J_max_reached: bool = False
    starts: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        # 1-based global position of each block's lead coefficient
        pos, out = 1, []
        for n in self.N:
            out.append(pos)
            pos += 1 + n
        object.__setattr__(self, "starts", tuple(out))

    @property
    def J(self) -> int:
        return len(self.N)

    @property
    def length(self) -> int:
        """Number of weights covered by the constructed blocks."""
        return sum(1 + n for n in self.N)

    def N_prev(self, j: int) -> int:
        return 0 if j == 1 else self.N[j - 2]

    def block_range(self, j: int) -> tuple[int, int]:
        """Range ``(lo, hi)`` of ``t``-indices used by the tail of block ``j``."""
        lo = self.N_prev(j) + 1
        return lo, self.N_prev(j) + self.N[j - 1]

    def locate(self, pos: int) -> tuple[int, int]:
        """Map a global position to ``(block j, offset)``; offset 0 is the lead slot."""
        if not 1 <= pos <= self.length:
            raise DomainError(f"position {pos} outside the constructed range 1..{self.length}")
        j = bisect.bisect_right(self.starts, pos)
        return j, pos - self.starts[j - 1]

    def weight(self, pos: int) -> float:
        j, off = self.locate(pos)
        if off == 0:
            return t(j)
        return t(self.N_prev(j) + off)

    def dense_weights(self, limit: int | None = None) -> np.ndarray:
        """First ``limit`` weights (all constructed ones by default) as an array."""
        total = self.length if limit is None else min(limit, self.length)
        if total > DENSE_BUDGET:
            raise DomainError(f"{total} weights exceed the dense budget {DENSE_BUDGET}")
        out = np.empty(total)
        pos = 0
        for j in range(1, self.J + 1):
            if pos >= total:
                break
            out[pos] = t(j)
            pos += 1
            lo, hi = self.block_range(j)
            take = min(hi - lo + 1, total - pos)
            out[pos:pos + take] = 1.0 / np.sqrt(np.arange(lo, lo + take, dtype=float))
            pos += take
        return out

    def is_feasible(self, j: int, n: int) -> bool:
        """Whether ``N_j = n`` satisfies both conditions of the recursion."""
        prev = self.N_prev(j)
        if n <= 10 * prev or n <= 10:
            return False
        bj = a(j) * t(j) / sum_t(prev + 1, prev + n)
        bound = a(j) / L(j)
        if j > 1:
            bound = min(bound, self.b[j - 2])
        return bj < bound

    def to_json(self) -> dict:
        return {"J": self.J, "N": [str(n) if n > 2**53 else n for n in self.N], "b": list(self.b),
                "J_max_reached": self.J_max_reached}


def _smallest_feasible(prev_n: int, j: int, b_prev: float | None) -> tuple[int, float, float]:
    lo_floor = max(10 * prev_n + 1, 11)
    bound = a(j) / L(j)
    if b_prev is not None:
        bound = min(bound, b_prev)

    def b_of(n: int) -> tuple[float, float]:
        s = sum_t(prev_n + 1, prev_n + n)
        return a(j) * t(j) / s, s

    if b_of(lo_floor)[0] < bound:
        n = lo_floor
    else:
        # b_j decreases in N_j; gallop then bisect on Python ints
        hi = lo_floor * 2
        while b_of(hi)[0] >= bound:
            hi *= 2
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if b_of(mid)[0] < bound:
                hi = mid
            else:
                lo = mid
        n = hi
    bj, s = b_of(n)
    return n, bj, s


def build_weights(J: int) -> WeightSequence:
    """Construct the first ``J`` blocks (fewer, flagged, if ``N_j`` overflows floats)."""
    if J < 1:
        raise DomainError("need at least one block")
    Ns, bs, sums = [], [], []
    overflow = False
    for j in range(1, J + 1):
        prev = Ns[-1] if Ns else 0
        if 10 * prev + 1 > FLOAT_CEILING:
            overflow = True
            break
        n, bj, s = _smallest_feasible(prev, j, bs[-1] if bs else None)
        Ns.append(n)
        bs.append(bj)
        sums.append(s)
    return WeightSequence(tuple(Ns), tuple(bs), tuple(sums), overflow)


@dataclass(frozen=True)
class BlockVector:
    """Blockwise-constant vector: block ``j`` is ``(lead_j, tail_j x N_j)``."""

    leads: tuple[float, ...]
    tails: tuple[float, ...]
    lengths: tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.leads)

    def dense(self, budget: int = DENSE_BUDGET) -> np.ndarray:
        total = sum(1 + n for n in self.lengths)
        if total > budget:
            raise DomainError(f"dense expansion needs {total} entries, budget is {budget}")
        parts = []
        for lead, tail, n in zip(self.leads, self.tails, self.lengths):
            parts.append(np.array([lead]))
            parts.append(np.full(n, tail))
        return np.concatenate(parts) if parts else np.zeros(0)


def make_block_vector(K: int, w: WeightSequence) -> BlockVector:
    """First ``K`` blocks of ``(a_1, -b_1 x N_1, a_2, -b_2 x N_2, ...)``."""
    if not 1 <= K <= w.J:
        raise DomainError(f"K={K} outside 1..{w.J}")
    return BlockVector(tuple(a(j) for j in range(1, K + 1)), tuple(-w.b[j] for j in range(K)),
                       tuple(w.N[:K]))


def _block_tail_parts(x: BlockVector, w: WeightSequence):
    """Return ``(sup |tail sums|, tail sum from each block start, l2 norm)``."""
    if x.K > w.J:
        raise DomainError("block vector longer than the weight sequence")
    K = x.K
    starts = [0.0] * (K + 1)  # starts[j-1] = sum of w_n x_n from the lead of block j onward
    best = 0.0
    for j in range(K, 0, -1):
        lead, tail, n = x.leads[j - 1], x.tails[j - 1], x.lengths[j - 1]
        r_next = starts[j]
        s_full = w.block_sums[j - 1]
        lo, hi = w.block_range(j)
        s_last = t(hi)
        candidates = [r_next, r_next + tail * s_full, r_next + tail * s_last]
        starts[j - 1] = r_next + tail * s_full + lead * t(j)
        candidates.append(starts[j - 1])
        # inner partial sums are monotone in the cut point, so the end points suffice
        best = max(best, max(abs(c) for c in candidates))
    l2 = math.sqrt(math.fsum(l * l + n * tl * tl for l, tl, n in zip(x.leads, x.tails, x.lengths)))
    return best, starts[:K], l2


def block_norm(x: BlockVector, w: WeightSequence) -> float:
    """``max{sup_N |sum_{n>=N} w_n x_n|, ||x||_2}`` in O(K)."""
    tail, _, l2 = _block_tail_parts(x, w)
    return max(tail, l2)


def block_seminorms(x: BlockVector, w: WeightSequence) -> tuple[float, float]:
    """``(tail-sup part, l2 part)`` of the norm."""
    tail, _, l2 = _block_tail_parts(x, w)
    return tail, l2


def threshold_blocks(x: BlockVector, eps: float) -> BlockVector:
    if not eps > 0:
        raise DomainError("threshold must be positive")
    keep = lambda v: v if abs(v) > eps else 0.0
    return BlockVector(tuple(keep(v) for v in x.leads), tuple(keep(v) for v in x.tails), x.lengths)


@dataclass
class QGViolation:
    k: int
    K: int
    eps: float
    ratio: float
    thresholded_norm: float
    norm: float
    thresholded_tail: float
    certificate: float
    analytic_sum: float
    tail_ratio: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def analytic_partial_sum(k: int, K: int) -> float:
    return math.fsum(1.0 / (n * math.log(n + 1)) for n in range(k + 1, K + 1))


def qg_violation_ratio(k: int, w: WeightSequence, K: int) -> QGViolation:
    """Threshold the ``K``-block vector at ``eps = (b_k + b_{k+1})/2`` and compare norms.

    ``ratio`` is ``||T_eps x|| / ||x||`` on the ``K``-block vector.
    ``certificate`` is the tail sum of ``T_eps x`` from the lead of block ``k+1``,
    which lower-bounds its tail-sup part and equals ``analytic_sum`` whenever
    every lead ``a_j`` (``k < j <= K``) survives the threshold.
    """
    if k < 1 or k + 1 > K:
        raise DomainError(f"need 1 <= k < K, got k={k}, K={K}")
    if K > w.J:
        raise DomainError(f"K={K} exceeds the {w.J} constructed blocks")
    eps = 0.5 * (w.b[k - 1] + w.b[k])
    x = make_block_vector(K, w)
    tx = threshold_blocks(x, eps)
    t_tail, t_starts, t_l2 = _block_tail_parts(tx, w)
    x_norm = block_norm(x, w)
    t_norm = max(t_tail, t_l2)
    return QGViolation(k=k, K=K, eps=eps, ratio=t_norm / x_norm, thresholded_norm=t_norm, norm=x_norm,
                       thresholded_tail=t_tail, certificate=t_starts[k], analytic_sum=analytic_partial_sum(k, K),
                       tail_ratio=t_tail / x_norm)


def weights_at(w: WeightSequence, positions: np.ndarray) -> np.ndarray:
    """Weights at 1-based global positions (vectorised, positions below 2**63)."""
    pos = np.asarray(positions, dtype=np.int64)
    usable = [s for s in w.starts if s < 2**62]
    starts = np.asarray(usable, dtype=np.int64)
    j = np.searchsorted(starts, pos, side="right")
    off = pos - starts[j - 1]
    prev = np.asarray((0,) + w.N[: len(usable) - 1], dtype=float)[j - 1]
    idx = np.where(off == 0, j.astype(float), prev + off.astype(float))
    return 1.0 / np.sqrt(idx)


def signed_tail_sup(weights: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Tail-sup seminorm of ``1_{delta A}``; rows hold the weights of A in increasing position order."""
    suffix = np.cumsum((weights * signs)[..., ::-1], axis=-1)
    return np.abs(suffix).max(axis=-1)


@dataclass
class UniformAReport:
    max_ratio: float
    witness: dict
    exhaustive_sets: int
    random_trials: int
    bound: float = 2.0

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.bound

    def to_json(self) -> dict:
        return {"max_ratio": self.max_ratio, "bound": self.bound, "passed": self.passed,
                "witness": self.witness, "exhaustive_sets": self.exhaustive_sets,
                "random_trials": self.random_trials}


def uniform_A_check(m: int, w: WeightSequence, trials: int, seed: int = 0, prefix: int = 200,
                    exhaustive_size: int = 3) -> UniformAReport:
    """Check ``||1_{delta A}||_1 <= 2 sqrt|A|`` exhaustively on a prefix and on random sets.

    Exhaustive part: every ``A`` inside the first ``prefix`` positions with
    ``|A| <= exhaustive_size`` and every sign pattern.  Random part: ``trials``
    sets with ``|A| <= m``; half use uniform positions in the prefix, half
    log-uniform positions over the whole constructed range.
    """
    if m < 1:
        raise DomainError("set size must be >= 1")
    prefix = min(prefix, w.length)
    pw = weights_at(w, np.arange(1, prefix + 1))
    best, witness, count = -1.0, {}, 0
    for size in range(1, exhaustive_size + 1):
        combos = np.array(list(itertools.combinations(range(prefix), size)), dtype=np.int64)
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=size)))
        rows = pw[combos]
        for s in signs:
            vals = signed_tail_sup(rows, s[None, :]) / math.sqrt(size)
            count += vals.size
            i = int(np.argmax(vals))
            if vals[i] > best:
                best = float(vals[i])
                witness = {"A": (combos[i] + 1).tolist(), "signs": s.astype(int).tolist()}
    rng = np.random.default_rng(seed)
    top = min(w.length, 2**62)
    for trial in range(trials):
        size = int(rng.integers(1, m + 1))
        if trial % 2 == 0:
            pos = rng.choice(prefix, size=min(size, prefix), replace=False) + 1
        else:
            draws = np.exp(rng.uniform(0.0, math.log(top), size=size))
            pos = np.unique(np.clip(draws.astype(np.int64), 1, top))
        pos = np.sort(pos)
        s = rng.choice((1.0, -1.0), size=pos.size)
        val = float(signed_tail_sup(weights_at(w, pos), s)) / math.sqrt(pos.size)
        if val > best:
            best = val
            witness = {"A": [int(p) for p in pos], "signs": s.astype(int).tolist()}
    return UniformAReport(best, witness, count, trials)


def adversarial_uniform_A(w: WeightSequence, max_size: int = 64, prefix: int = 10_000) -> dict:
    """Probe ``||1_A||_1 / sqrt|A|`` on the sets of the ``k`` largest weights, all signs positive.

    Positive signs make the tail sup equal to the full sum, so this family is
    the natural worst case and is reported beside the sampled check.
    """
    prefix = min(prefix, w.length)
    pw = weights_at(w, np.arange(1, prefix + 1))
    order = np.argsort(-pw, kind="stable")
    sums = np.cumsum(pw[order[:max_size]])
    ratios = sums / np.sqrt(np.arange(1, sums.size + 1))
    k = int(np.argmax(ratios)) + 1
    return {"max_ratio": float(ratios[k - 1]), "size": k, "A": sorted(int(i) + 1 for i in order[:k]),
            "ratios": [float(r) for r in ratios]}


def counterexample_norm(w: WeightSequence, limit: int | None = None) -> NormOracle:
    """Dense weighted-tail oracle on a prefix of the constructed weights."""
    weights = w.dense_weights(limit)
    spec = f"weighted_tail:counterexample={w.J}"
    return make_weighted_tail_norm(weights, name=spec if limit is None else f"{spec}[:{limit}]", spec=spec)
