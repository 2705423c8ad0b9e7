"""Coefficient vectors, norm oracles and the built-in norms.

Indices are 1-based everywhere in the public API (``e_1, e_2, ...``); the
dense numpy storage underneath is 0-based.  Norm oracles are vectorised: the
``batch`` callable maps an ``(k, n)`` array of coefficient rows to ``k`` norms,
which is what the brute-force estimators lean on.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "CoeffVector",
    "NormOracle",
    "IndexSet",
    "index_set",
    "precedes",
    "indicator",
    "norm_eval",
    "make_lp_norm",
    "make_weighted_tail_norm",
    "make_max_norm",
    "sup_norm",
    "tail_sup_seminorm",
    "parse_norm_spec",
    "load_weights_csv",
    "save_weights_csv",
]

IndexSet = tuple  # sorted tuple of distinct positive ints


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def index_set(items: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted({int(i) for i in items}))
    if out and out[0] < 1:
        raise DomainError(f"indices must be positive, got {out[0]}")
    return out


def precedes(a: Sequence[int], b: Sequence[int]) -> bool:
    """``A < B`` in the sense ``max A < min B``; vacuously true if either is empty."""
    if not a or not b:
        return True
    return max(a) < min(b)


class CoeffVector:
    """A finite real coefficient sequence ``x = sum_n x_n e_n`` on ``{1..ambient_dim}``."""

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[float] | np.ndarray):
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.size == 0:
            raise DomainError("ambient dimension must be positive")
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr.setflags(write=False)
        self._values = arr

    @classmethod
    def from_entries(cls, entries: Mapping[int, float], ambient_dim: int) -> "CoeffVector":
        if ambient_dim < 1:
            raise DomainError("ambient_dim must be >= 1")
        arr = np.zeros(ambient_dim)
        for n, v in entries.items():
            if not 1 <= n <= ambient_dim:
                raise DomainError(f"index {n} outside 1..{ambient_dim}")
            arr[n - 1] = v
        return cls(arr)

    @classmethod
    def zeros(cls, ambient_dim: int) -> "CoeffVector":
        return cls(np.zeros(ambient_dim))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def ambient_dim(self) -> int:
        return self._values.size

    @property
    def entries(self) -> dict[int, float]:
        return {int(i) + 1: float(self._values[i]) for i in np.flatnonzero(self._values)}

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) + 1 for i in np.flatnonzero(self._values))

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= self.ambient_dim:
            return 0.0
        return float(self._values[n - 1])

    def __len__(self) -> int:
        return self.ambient_dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffVector):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and np.array_equal(self._values, other._values)

    def __hash__(self) -> int:
        return hash(self._values.tobytes())

    def __repr__(self) -> str:
        return f"CoeffVector({self._values.tolist()})"

    def __add__(self, other: "CoeffVector") -> "CoeffVector":
        return CoeffVector(self._values + _as_array(other))

    def __sub__(self, other: "CoeffVector") -> "CoeffVector":
        return CoeffVector(self._values - _as_array(other))

    def __mul__(self, scalar: float) -> "CoeffVector":
        return CoeffVector(self._values * float(scalar))

    __rmul__ = __mul__

    def tolist(self) -> list[float]:
        return self._values.tolist()


def _as_array(x: CoeffVector | np.ndarray | Sequence[float]) -> np.ndarray:
    if isinstance(x, CoeffVector):
        return x.values
    return np.asarray(x, dtype=float)


def indicator(a: Sequence[int], signs: Sequence[int] | None, ambient_dim: int) -> np.ndarray:
    """Dense array of ``1_{eps A}``; ``signs`` aligned with sorted ``a`` (``None`` means all +1)."""
    out = np.zeros(ambient_dim)
    if len(a):
        idx = np.asarray(a, dtype=int) - 1
        out[idx] = 1.0 if signs is None else np.asarray(signs, dtype=float)
    return out


@dataclass(frozen=True, eq=False)
class NormOracle:
    """A norm on coefficient space.

    ``batch`` evaluates rows of a 2-D array.  ``metadata`` carries analytic
    constants that are known exactly for this norm (keys such as ``K_b``,
    ``K_s``, ``C_l``, ``C_w``, ``C_g``, ``C_a``, ``C_b``, ``C_sc``, ``lambda``)
    plus ``exact`` when those values are proven rather than guessed.
    """

    name: str
    batch: Callable[[np.ndarray], np.ndarray]
    metadata: Mapping[str, float | bool] = field(default_factory=dict)
    seminorm_parts: tuple["NormOracle", ...] = ()
    max_dim: int | None = None
    spec: str = ""

    def __call__(self, x: CoeffVector | np.ndarray | Sequence[float]) -> float:
        return norm_eval(self, x)

    def many(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[None, :]
        if self.max_dim is not None and rows.shape[-1] > self.max_dim:
            raise DomainError(f"{self.name}: dimension {rows.shape[-1]} exceeds {self.max_dim}")
        return self.batch(rows)

    def const(self, key: str) -> float | None:
        v = self.metadata.get(key)
        return None if v is None else float(v)

    @property
    def exact(self) -> bool:
        return bool(self.metadata.get("exact", False))

    @property
    def suppression_unconditional(self) -> bool:
        """True when coordinate projections are known to be norm-one (``K_s = 1``)."""
        return self.exact and self.metadata.get("K_s") == 1


def norm_eval(oracle: NormOracle, x: CoeffVector | np.ndarray | Sequence[float]) -> float:
    arr = _as_array(x)
    if arr.ndim != 1:
        raise DomainError("norm_eval expects a single vector")
    return float(oracle.many(arr[None, :])[0])


def sup_norm(x: CoeffVector | np.ndarray | Sequence[float]) -> float:
    arr = _as_array(x)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


_LP_CONSTANTS = {
    "K_b": 1, "K_s": 1, "C_l": 1, "C_w": 1, "C_g": 1, "C_a": 1,
    "C_b": 1, "C_sc": 1, "C_sd": 1, "C_L": 1, "C_pl": 1, "exact": True,
}


def make_lp_norm(p: float | str) -> NormOracle:
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in {"inf", "infinity", "∞"} else float(p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"lp norm needs p >= 1, got {p}")
    if p == 1:
        fn = lambda rows: np.abs(rows).sum(axis=-1)
    elif p == 2:
        fn = lambda rows: np.sqrt(np.einsum("ij,ij->i", rows, rows))
    elif math.isinf(p):
        fn = lambda rows: np.abs(rows).max(axis=-1, initial=0.0)
    else:
        fn = lambda rows: np.linalg.norm(rows, ord=p, axis=-1)
    label = "inf" if math.isinf(p) else f"{p:g}"
    return NormOracle(name=f"l{label}", batch=fn, metadata=dict(_LP_CONSTANTS, p=p), spec=f"lp:{label}")


def tail_sup_seminorm(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``sup_N |sum_{n >= N} w_n x_n|`` via one suffix-sum pass per row."""
    rows = np.atleast_2d(rows)
    prod = rows * weights[: rows.shape[-1]]
    suffix = np.cumsum(prod[:, ::-1], axis=-1)
    return np.abs(suffix).max(axis=-1, initial=0.0)


def make_weighted_tail_norm(weights: Sequence[float] | np.ndarray, name: str = "weighted_tail",
                            spec: str = "") -> NormOracle:
    """``max{ sup_N |sum_{n>=N} w_n x_n|, ||x||_2 }`` for positive weights."""
    w = np.array(weights, dtype=float).reshape(-1)
    if w.size == 0 or np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise DomainError("weights must be finite and strictly positive")
    w.setflags(write=False)
    tail = NormOracle(name=f"{name}.tail", batch=lambda rows: tail_sup_seminorm(rows, w), max_dim=w.size)
    l2 = NormOracle(name=f"{name}.l2", batch=lambda rows: np.sqrt(np.einsum("ij,ij->i", rows, rows)))

    def fused(rows: np.ndarray) -> np.ndarray:
        prod = rows * w[: rows.shape[-1]]
        suffix = np.cumsum(prod[:, ::-1], axis=-1)
        return np.maximum(np.abs(suffix).max(axis=-1, initial=0.0), np.sqrt(np.einsum("ij,ij->i", rows, rows)))

    # the uniform bound ||1_{dA}||_1 <= lambda |A|^(1/2) is checked numerically, not recorded here
    return NormOracle(name=name, batch=fused, metadata={"weights_len": int(w.size)},
                      seminorm_parts=(tail, l2), max_dim=w.size, spec=spec or name)


def make_max_norm(parts: Sequence[NormOracle], name: str | None = None, spec: str = "") -> NormOracle:
    parts = tuple(parts)
    if not parts:
        raise DomainError("max norm needs at least one part")

    def fn(rows: np.ndarray) -> np.ndarray:
        return np.max(np.stack([p.many(rows) for p in parts]), axis=0)

    dims = [p.max_dim for p in parts if p.max_dim is not None]
    label = name or "max(" + ",".join(p.name for p in parts) + ")"
    return NormOracle(name=label, batch=fn, seminorm_parts=parts,
                      max_dim=min(dims) if dims else None,
                      spec=spec or "max:[" + ",".join(p.spec or p.name for p in parts) + "]")


def load_weights_csv(path: str | Path) -> np.ndarray:
    vals = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            v = float(row[0])
            if not v > 0:
                raise DomainError(f"{path}:{lineno}: weight must be positive, got {v}")
            vals.append(v)
    return np.array(vals)


def save_weights_csv(path: str | Path, weights: Iterable[float]) -> None:
    with open(path, "w", newline="") as fh:
        for v in weights:
            fh.write(f"{float(v)!r}\n")


def _split_top_level(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur).strip())
    return [p for p in out if p]


def parse_norm_spec(spec: str, base_dir: str | Path | None = None) -> NormOracle:
    """Build an oracle from a config string.

    Accepted forms::

        lp:2    lp:1.5    lp:inf
        weighted_tail:file=weights.csv
        weighted_tail:counterexample=3     (dense prefix of the 3-block construction)
        max:[lp:1,lp:inf]
    """
    spec = spec.strip().strip('"')
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "lp":
        return make_lp_norm(arg or "2")
    if kind == "weighted_tail":
        key, _, val = arg.partition("=")
        key = key.strip()
        if key == "file":
            path = Path(val)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return make_weighted_tail_norm(load_weights_csv(path), spec=spec)
        if key == "counterexample":
            from .counterexample_space import build_weights

            w = build_weights(int(val))
            return make_weighted_tail_norm(w.dense_weights(), name=f"counterexample{int(val)}", spec=spec)
        raise DomainError(f"unknown weighted_tail argument: {arg!r}")
    if kind == "max":
        inner = arg.strip()
        if not (inner.startswith("[") and inner.endswith("]")):
            raise DomainError("max spec must look like max:[a,b,...]")
        parts = [parse_norm_spec(p, base_dir) for p in _split_top_level(inner[1:-1])]
        return make_max_norm(parts, spec=spec)
    raise DomainError(f"unknown norm spec {spec!r}")
