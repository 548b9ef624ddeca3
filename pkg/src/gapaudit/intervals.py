"""Compressed integer set stored as sorted maximal inclusive intervals.

The audited ID spaces are huge at the top end (tens of billions, with a
multi-billion legitimate hole) but locally dense, so a flat bitmap is
impractical while a modest list of [lo, hi] intervals covers everything.
All set algebra here is vectorized over the interval bounds; instances
are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

__all__ = ["IdIntervalSet", "IntervalAccumulator"]


def _as_value_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    if arr.dtype.kind == "f":
        raise TypeError("interval set values must be integers, got floats")
    if arr.dtype.kind not in "iu" or arr.dtype != np.int64:
        arr = arr.astype(np.int64)
    if arr.min() < 0:
        raise ValueError("interval set values must be non-negative")
    return arr


def _merge_sorted(los: np.ndarray, his: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coalesce intervals sorted by lo into maximal (overlap or adjacency merged)."""
    if los.size == 0:
        return los, his
    run_max = np.maximum.accumulate(his)
    starts = np.empty(los.size, dtype=bool)
    starts[0] = True
    starts[1:] = los[1:] > run_max[:-1] + 1
    out_lo = los[starts]
    out_hi = np.maximum.reduceat(run_max, np.nonzero(starts)[0])
    return out_lo, out_hi


class IdIntervalSet:
    """Immutable set of non-negative 64-bit integers as maximal intervals.

    Supports union, intersection, difference, complement-within-a-range,
    scalar and vectorized membership, and rank/select. ``rank(v)`` counts
    elements <= v; ``select(k)`` returns the k-th smallest (0-based).
    """

    __slots__ = ("_los", "_his", "_cumlen")

    def __init__(self, los: np.ndarray, his: np.ndarray):
        # Assumes normalized input; use the from_* constructors.
        self._los = los
        self._his = his
        self._cumlen = None

    # -- constructors ------------------------------------------------

    @classmethod
    def empty(cls) -> "IdIntervalSet":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))

    @classmethod
    def from_values(cls, values) -> "IdIntervalSet":
        """Build from an iterable/array of values (duplicates collapse)."""
        arr = _as_value_array(values)
        if arr.size == 0:
            return cls.empty()
        u = np.unique(arr)
        breaks = np.nonzero(np.diff(u) > 1)[0]
        los = u[np.concatenate(([0], breaks + 1))]
        his = u[np.concatenate((breaks, [u.size - 1]))]
        return cls(los, his)

    @classmethod
    def from_intervals(cls, pairs: Iterable[tuple[int, int]]) -> "IdIntervalSet":
        """Build from (lo, hi) inclusive pairs; overlapping/adjacent pairs merge."""
        pairs = list(pairs)
        if not pairs:
            return cls.empty()
        los = _as_value_array([p[0] for p in pairs])
        his = _as_value_array([p[1] for p in pairs])
        if np.any(los > his):
            raise ValueError("interval with lo > hi")
        order = np.argsort(los, kind="stable")
        return cls(*_merge_sorted(los[order], his[order]))

    # -- basic properties --------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self._los.size == 0

    @property
    def n_intervals(self) -> int:
        return int(self._los.size)

    @property
    def cardinality(self) -> int:
        return int(np.sum(self._his - self._los + 1)) if self._los.size else 0

    @property
    def min_value(self) -> int:
        if self.is_empty:
            raise ValueError("empty set has no minimum")
        return int(self._los[0])

    @property
    def max_value(self) -> int:
        if self.is_empty:
            raise ValueError("empty set has no maximum")
        return int(self._his[-1])

    def runs(self) -> Iterator[tuple[int, int]]:
        for lo, hi in zip(self._los.tolist(), self._his.tolist()):
            yield lo, hi

    def to_list(self) -> list[tuple[int, int]]:
        return list(self.runs())

    def bounds_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Read-only views of the (lo, hi) bound arrays."""
        return self._los, self._his

    # -- membership / rank / select ----------------------------------

    def contains(self, value: int) -> bool:
        idx = int(np.searchsorted(self._los, value, side="right")) - 1
        return idx >= 0 and value <= self._his[idx]

    __contains__ = contains

    def contains_many(self, values) -> np.ndarray:
        """Vectorized membership test; returns a boolean array."""
        vals = _as_value_array(values)
        if self.is_empty or vals.size == 0:
            return np.zeros(vals.size, dtype=bool)
        idx = np.searchsorted(self._los, vals, side="right") - 1
        inside = idx >= 0
        safe = np.where(inside, idx, 0)
        inside &= vals <= self._his[safe]
        return inside

    def _cumulative(self) -> np.ndarray:
        if self._cumlen is None:
            self._cumlen = np.cumsum(self._his - self._los + 1)
        return self._cumlen

    def rank(self, value: int) -> int:
        """Number of set elements <= value."""
        if self.is_empty:
            return 0
        idx = int(np.searchsorted(self._los, value, side="right")) - 1
        if idx < 0:
            return 0
        cum = self._cumulative()
        before = int(cum[idx - 1]) if idx > 0 else 0
        return before + int(min(value, int(self._his[idx])) - int(self._los[idx]) + 1)

    def select(self, k: int) -> int:
        """k-th smallest element, 0-based."""
        card = self.cardinality
        if not 0 <= k < card:
            raise IndexError(f"select index {k} out of range for {card} elements")
        cum = self._cumulative()
        i = int(np.searchsorted(cum, k, side="right"))
        before = int(cum[i - 1]) if i > 0 else 0
        return int(self._los[i]) + (k - before)

    def count_in(self, lo: int, hi: int) -> int:
        """Number of set elements within [lo, hi]."""
        if lo > hi:
            return 0
        low = self.rank(lo - 1) if lo > 0 else 0
        return self.rank(hi) - low

    # -- set algebra ---------------------------------------------------

    def union(self, other: "IdIntervalSet") -> "IdIntervalSet":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        los = np.concatenate((self._los, other._los))
        his = np.concatenate((self._his, other._his))
        order = np.argsort(los, kind="stable")
        return IdIntervalSet(*_merge_sorted(los[order], his[order]))

    __or__ = union

    def intersect(self, other: "IdIntervalSet") -> "IdIntervalSet":
        if self.is_empty or other.is_empty:
            return IdIntervalSet.empty()
        b_lo, b_hi = other._los, other._his
        first = np.searchsorted(b_hi, self._los, side="left")
        last = np.searchsorted(b_lo, self._his, side="right") - 1
        counts = np.maximum(last - first + 1, 0)
        total = int(counts.sum())
        if total == 0:
            return IdIntervalSet.empty()
        a_idx = np.repeat(np.arange(self._los.size), counts)
        offsets = np.cumsum(counts) - counts
        b_idx = np.arange(total) - np.repeat(offsets, counts) + np.repeat(first, counts)
        out_lo = np.maximum(self._los[a_idx], b_lo[b_idx])
        out_hi = np.minimum(self._his[a_idx], b_hi[b_idx])
        return IdIntervalSet(out_lo, out_hi)

    __and__ = intersect

    def subtract(self, other: "IdIntervalSet") -> "IdIntervalSet":
        if self.is_empty or other.is_empty:
            return self
        return self.intersect(other.complement_within(self.min_value, self.max_value))

    __sub__ = subtract

    def complement_within(self, lo: int, hi: int) -> "IdIntervalSet":
        """Maximal runs of [lo, hi] not covered by this set."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        if self.is_empty:
            return IdIntervalSet.from_intervals([(lo, hi)])
        i0 = int(np.searchsorted(self._his, lo, side="left"))
        i1 = int(np.searchsorted(self._los, hi, side="right"))
        sub_lo = np.clip(self._los[i0:i1], lo, None)
        sub_hi = np.clip(self._his[i0:i1], None, hi)
        gap_lo = np.concatenate(([lo], sub_hi + 1))
        gap_hi = np.concatenate((sub_lo - 1, [hi]))
        keep = gap_lo <= gap_hi
        return IdIntervalSet(gap_lo[keep].astype(np.int64), gap_hi[keep].astype(np.int64))

    # -- dunder plumbing -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdIntervalSet):
            return NotImplemented
        return np.array_equal(self._los, other._los) and np.array_equal(self._his, other._his)

    __hash__ = None  # mutable-free but identity hashing would mislead

    def __bool__(self) -> bool:
        return not self.is_empty

    def __repr__(self) -> str:
        return f"IdIntervalSet({self.n_intervals} intervals, {self.cardinality} values)"


class IntervalAccumulator:
    """Streaming builder: buffer values from any number of chunks, then build.

    Tracks how many appended values were duplicates of already-seen ones,
    which downstream reporting surfaces as a data-quality warning.
    """

    def __init__(self) -> None:
        self._chunks: list[np.ndarray] = []
        self._pending: list[int] = []
        self._n_values = 0

    def add(self, value: int) -> None:
        self._pending.append(value)
        if len(self._pending) >= 65536:
            self._flush()

    def add_many(self, values) -> None:
        arr = _as_value_array(values)
        if arr.size:
            self._chunks.append(arr)
            self._n_values += int(arr.size)

    def _flush(self) -> None:
        if self._pending:
            self._chunks.append(_as_value_array(self._pending))
            self._n_values += len(self._pending)
            self._pending = []

    @property
    def n_values(self) -> int:
        return self._n_values + len(self._pending)

    def build(self) -> tuple[IdIntervalSet, int]:
        """Return (interval set, duplicate count)."""
        self._flush()
        if not self._chunks:
            return IdIntervalSet.empty(), 0
        combined = np.concatenate(self._chunks) if len(self._chunks) > 1 else self._chunks[0]
        result = IdIntervalSet.from_values(combined)
        return result, int(combined.size) - result.cardinality
