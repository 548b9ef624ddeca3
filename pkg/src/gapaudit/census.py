"""Gap census: which IDs inside the live range have no record?

Builds the observed-ID set per record kind, subtracts configured
exclusions (legitimate counter discontinuities such as an epoch jump),
and reports the remaining maximal missing runs. Large unexplained runs
can be surfaced as exclusion candidates for human review.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .idcodec import RecordId
from .intervals import IdIntervalSet, IntervalAccumulator

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib


class EmptyObservedSet(ValueError):
    """Census requested over an empty observed set (range undefined)."""


@dataclass(frozen=True)
class ExclusionRange:
    """Inclusive ID range deliberately absent from the sequence (not missing data)."""

    lo: int
    hi: int
    label: str = ""

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"exclusion lo {self.lo} > hi {self.hi}")
        if self.lo < 0:
            raise ValueError("exclusion bounds must be non-negative")


@dataclass(frozen=True)
class ObservedBuild:
    """Result of accumulating observed IDs: the set plus data-quality tallies."""

    intervals: IdIntervalSet
    duplicates: int
    total_values: int


@dataclass(frozen=True)
class CensusResult:
    """Missing-ID census over [lo, hi].

    ``missing`` holds the maximal runs inside the observed hull that are
    neither observed nor excluded. When the requested range extends past
    the hull, the under/over-range areas are tallied separately in
    ``pre_range_unobserved`` / ``post_range_unobserved`` and never fold
    into ``total_missing`` (nothing can be inferred about IDs outside the
    span the corpus demonstrably covers).
    """

    lo: int
    hi: int
    missing: IdIntervalSet
    observed_in_range: int
    excluded_in_range: int
    pre_range_unobserved: int = 0
    post_range_unobserved: int = 0
    duplicates: int = 0

    @property
    def runs(self) -> list[tuple[int, int]]:
        return self.missing.to_list()

    @property
    def total_missing(self) -> int:
        return self.missing.cardinality


def build_observed(ids: Iterable[RecordId | int] | np.ndarray) -> ObservedBuild:
    """Accumulate a stream of IDs (RecordId or plain integers) into an interval set.

    All RecordIds must share one kind; duplicates collapse and are tallied.
    """
    acc = IntervalAccumulator()
    if isinstance(ids, np.ndarray):
        acc.add_many(ids)
    else:
        kind = None
        pending: list[int] = []
        for item in ids:
            if isinstance(item, RecordId):
                if kind is None:
                    kind = item.kind
                elif item.kind is not kind:
                    raise ValueError("mixed record kinds in one observed set")
                pending.append(item.value)
            else:
                pending.append(int(item))
            if len(pending) >= 65536:
                acc.add_many(pending)
                pending = []
        if pending:
            acc.add_many(pending)
    intervals, duplicates = acc.build()
    return ObservedBuild(intervals, duplicates, acc.n_values)


def normalize_exclusions(exclusions: Sequence[ExclusionRange]) -> IdIntervalSet:
    """Sort and merge exclusion ranges; overlaps are legal and coalesce."""
    return IdIntervalSet.from_intervals((e.lo, e.hi) for e in exclusions)


def census(
    observed: IdIntervalSet,
    lo: int | None = None,
    hi: int | None = None,
    exclusions: Sequence[ExclusionRange] = (),
) -> CensusResult:
    """Count maximal runs of IDs in [lo, hi] that are neither observed nor excluded.

    Parameters
    ----------
    observed : IdIntervalSet
        Distinct observed ID values for one record kind.
    lo, hi : int, optional
        Census bounds; both default to the observed hull ends.
    exclusions : sequence of ExclusionRange
        Legitimate discontinuities subtracted before counting.

    Raises
    ------
    EmptyObservedSet
        If the observed set is empty (no hull to reason about).
    """
    if observed.is_empty:
        raise EmptyObservedSet("cannot run a census over an empty observed set")
    hull_lo, hull_hi = observed.min_value, observed.max_value
    lo = hull_lo if lo is None else int(lo)
    hi = hull_hi if hi is None else int(hi)
    if lo > hi:
        raise ValueError(f"census range [{lo}, {hi}] is empty")

    excl = normalize_exclusions(exclusions)
    core_lo, core_hi = max(lo, hull_lo), min(hi, hull_hi)
    if core_lo > core_hi:
        missing = IdIntervalSet.empty()
    else:
        missing = observed.complement_within(core_lo, core_hi).subtract(excl)

    range_set = IdIntervalSet.from_intervals([(lo, hi)])
    excl_in_range = excl.intersect(range_set)
    excluded = excl_in_range.cardinality - excl_in_range.intersect(observed).cardinality

    pre = 0
    if lo < hull_lo:
        span = hull_lo - lo
        pre = span - excl.count_in(lo, hull_lo - 1)
    post = 0
    if hi > hull_hi:
        span = hi - hull_hi
        post = span - excl.count_in(hull_hi + 1, hi)

    return CensusResult(
        lo=lo,
        hi=hi,
        missing=missing,
        observed_in_range=observed.count_in(lo, hi),
        excluded_in_range=excluded,
        pre_range_unobserved=pre,
        post_range_unobserved=post,
    )


def detect_discontinuities(observed: IdIntervalSet, threshold: int) -> list[ExclusionRange]:
    """Find maximal missing runs of length >= threshold inside the observed hull.

    Candidates are flagged for human review; callers may promote them to
    exclusions for subsequent censuses.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if observed.is_empty:
        return []
    gaps = observed.complement_within(observed.min_value, observed.max_value)
    out = []
    for g_lo, g_hi in gaps.runs():
        length = g_hi - g_lo + 1
        if length >= threshold:
            out.append(ExclusionRange(g_lo, g_hi, label=f"detected run of {length} missing ids"))
    return out


def merge(a: IdIntervalSet, b: IdIntervalSet) -> IdIntervalSet:
    """Union of two observed sets (associative, commutative, idempotent)."""
    return a.union(b)


def load_exclusions(path: str | Path) -> list[ExclusionRange]:
    """Load exclusion ranges from a TOML or JSON file.

    TOML uses ``[[exclusions]]`` tables; JSON is a list of objects.
    Each entry carries ``lo``, ``hi`` and an optional ``label``.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        entries = json.loads(path.read_text(encoding="utf-8"))
    else:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        entries = data.get("exclusions", [])
    if not isinstance(entries, list):
        raise ValueError(f"exclusion file {path} must hold a list of ranges")
    return [
        ExclusionRange(int(e["lo"]), int(e["hi"]), str(e.get("label", "")))
        for e in entries
    ]
