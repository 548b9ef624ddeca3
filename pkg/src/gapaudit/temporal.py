"""Calendar attribution of missing IDs and burstiness of their placement.

IDs are issued nearly in time order, so a missing ID's creation moment is
estimated by linear interpolation (in ID position) between the timestamps
of its nearest observed neighbors. Months are UTC. Burstiness of gap
placement uses the dispersion score (sd - mean) / (sd + mean) over
inter-event distances in ID units: -1 for perfectly periodic events,
about 0 for Poisson placement, toward +1 for concentrated bursts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .census import CensusResult
from .idcodec import RecordId
from .intervals import IdIntervalSet

BURST_OPERANDS = ("run-start", "run-center", "per-id")


class NoNeighbors(ValueError):
    """A gap run lies outside the observed hull, so it cannot be dated."""


@dataclass(frozen=True)
class AttributedRun:
    """A missing run with estimated timestamps for its first and last ID."""

    lo: int
    hi: int
    t_lo: float
    t_hi: float

    def __len__(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class AttributionResult:
    runs: list[AttributedRun]
    clamped_timestamps: int


@dataclass(frozen=True)
class MonthlyGapStats:
    month: str
    month_index: int
    observed: int
    missing: int
    pct_missing: float
    rolling_pct: float
    cumulative_missing: int
    burstiness: float | None
    n_runs: int


@dataclass(frozen=True)
class BurstinessResult:
    month: str | None
    n_runs: int
    mean_gap: float | None
    sd_gap: float | None
    score: float | None


def month_index_of(ts) -> np.ndarray:
    """UTC months since 1970-01 for an array of unix-second timestamps."""
    arr = np.asarray(ts)
    if arr.dtype.kind == "f":
        arr = np.floor(arr).astype(np.int64)
    return arr.astype("datetime64[s]").astype("datetime64[M]").astype(np.int64)


def month_label(index: int) -> str:
    year, month = divmod(int(index), 12)
    return f"{1970 + year:04d}-{month + 1:02d}"


def _normalize_runs(gaps) -> list[tuple[int, int]]:
    if isinstance(gaps, CensusResult):
        return gaps.runs
    if isinstance(gaps, IdIntervalSet):
        return gaps.to_list()
    return [(int(lo), int(hi)) for lo, hi in gaps]


def _normalize_observed(observed, timestamps) -> tuple[np.ndarray, np.ndarray]:
    if timestamps is None:
        ids, ts = [], []
        for item, t in observed:
            ids.append(item.value if isinstance(item, RecordId) else int(item))
            ts.append(int(t))
        id_arr = np.asarray(ids, dtype=np.int64)
        ts_arr = np.asarray(ts, dtype=np.int64)
    else:
        id_arr = np.asarray(observed, dtype=np.int64)
        ts_arr = np.asarray(timestamps, dtype=np.int64)
    if id_arr.size != ts_arr.size:
        raise ValueError("observed ids and timestamps differ in length")
    order = np.argsort(id_arr, kind="stable")
    id_arr, ts_arr = id_arr[order], ts_arr[order]
    uniq, first = np.unique(id_arr, return_index=True)
    return uniq, ts_arr[first]


def attribute_timestamps(
    gaps,
    observed,
    timestamps=None,
) -> AttributionResult:
    """Date every missing run by interpolating between observed neighbors.

    ``gaps`` may be a CensusResult, an IdIntervalSet, or (lo, hi) pairs.
    ``observed`` is either an array of ID values with ``timestamps`` given
    separately, or an iterable of (id, created_utc) pairs. Non-monotone
    observed timestamps (clock skew in dumps) are raised to the running
    maximum before interpolating; the number of raised points is tallied.

    Raises NoNeighbors for a run outside the observed hull.
    """
    runs = _normalize_runs(gaps)
    ids, ts = _normalize_observed(observed, timestamps)
    if ids.size < 2 and runs:
        raise NoNeighbors("fewer than two observed ids; nothing to interpolate between")
    if not runs:
        return AttributionResult([], 0)

    env = np.maximum.accumulate(ts)
    clamped = int(np.sum(ts != env))
    env = env.astype(np.float64)

    los = np.array([r[0] for r in runs], dtype=np.int64)
    his = np.array([r[1] for r in runs], dtype=np.int64)
    if np.any(los > his):
        raise ValueError("gap run with lo > hi")
    if int(los.min()) <= int(ids[0]) or int(his.max()) >= int(ids[-1]):
        raise NoNeighbors("gap run outside the observed hull has no neighbors to interpolate between")

    idx = np.searchsorted(ids, los, side="left")
    left_ids = ids[idx - 1]
    right_ids = ids[idx]
    if np.any(right_ids <= his):
        raise ValueError("gap run overlaps observed ids")
    t_left = env[idx - 1]
    t_right = env[idx]
    slope = (t_right - t_left) / (right_ids - left_ids)
    t_lo = t_left + slope * (los - left_ids)
    t_hi = t_left + slope * (his - left_ids)

    out = [
        AttributedRun(int(lo), int(hi), float(a), float(b))
        for lo, hi, a, b in zip(los.tolist(), his.tolist(), t_lo.tolist(), t_hi.tolist())
    ]
    return AttributionResult(out, clamped)


def burstiness_score(intervals) -> float | None:
    """Dispersion score (sd - mean) / (sd + mean) of inter-event intervals.

    Population standard deviation, so a single interval is defined (and
    scores -1, as does any perfectly periodic sequence). Returns None when
    no interval exists or the denominator is zero.
    """
    arr = np.asarray(intervals, dtype=np.float64)
    if arr.size == 0:
        return None
    mean = float(arr.mean())
    sd = float(arr.std())
    if sd + mean == 0.0:
        return None
    return (sd - mean) / (sd + mean)


def _operand_positions(runs: Sequence[AttributedRun] | Sequence[tuple[int, int]], operand: str) -> np.ndarray:
    los = np.array([r.lo if isinstance(r, AttributedRun) else r[0] for r in runs], dtype=np.float64)
    his = np.array([r.hi if isinstance(r, AttributedRun) else r[1] for r in runs], dtype=np.float64)
    if operand == "run-start":
        return los
    if operand == "run-center":
        return (los + his) / 2.0
    if operand == "per-id":
        if los.size == 0:
            return los
        return np.concatenate([np.arange(lo, hi + 1, dtype=np.float64) for lo, hi in zip(los, his)])
    raise ValueError(f"unknown burst operand {operand!r}; choose from {BURST_OPERANDS}")


def burstiness(
    runs: Sequence[AttributedRun] | Sequence[tuple[int, int]],
    operand: str = "run-start",
    month: str | None = None,
) -> BurstinessResult:
    """Burstiness of gap placement in ID space for one span (e.g. one month).

    Undefined (score None, never 0) when fewer than two runs fall in the span.
    """
    n_runs = len(runs)
    positions = np.sort(_operand_positions(runs, operand))
    if n_runs < 2 or positions.size < 2:
        return BurstinessResult(month, n_runs, None, None, None)
    taus = np.diff(positions)
    mean = float(taus.mean())
    sd = float(taus.std())
    return BurstinessResult(month, n_runs, mean, sd, burstiness_score(taus))


def monthly_stats(
    attribution: AttributionResult | Sequence[AttributedRun],
    observed_ts,
    rolling_window: int = 3,
    burst_operand: str = "run-start",
) -> list[MonthlyGapStats]:
    """Per-month missing/observed tallies in chronological order.

    Each missing ID lands in the month of its interpolated timestamp, so a
    run spanning a month boundary splits its IDs accordingly and the sum
    over months equals the census total. Rolling mean is trailing over
    ``rolling_window`` months (shorter at the series head). Burstiness is
    computed per month over the runs whose estimated start falls in it.
    """
    if rolling_window < 1:
        raise ValueError("rolling window must be >= 1")
    runs = attribution.runs if isinstance(attribution, AttributionResult) else list(attribution)

    obs_months = month_index_of(np.asarray(observed_ts))
    miss_month_chunks: list[np.ndarray] = []
    run_month: list[int] = []
    for r in runs:
        n = r.hi - r.lo + 1
        if n == 1:
            t = np.array([r.t_lo])
        else:
            t = np.linspace(r.t_lo, r.t_hi, n)
        miss_month_chunks.append(month_index_of(t))
        run_month.append(int(month_index_of(np.array([r.t_lo]))[0]))
    miss_months = np.concatenate(miss_month_chunks) if miss_month_chunks else np.empty(0, dtype=np.int64)

    candidates = [m for m in (obs_months, miss_months) if m.size]
    if not candidates:
        return []
    first = int(min(m.min() for m in candidates))
    last = int(max(m.max() for m in candidates))
    n_months = last - first + 1
    obs_counts = np.bincount(obs_months - first, minlength=n_months)
    miss_counts = np.bincount(miss_months - first, minlength=n_months) if miss_months.size else np.zeros(n_months, dtype=np.int64)

    runs_by_month: dict[int, list[AttributedRun]] = {}
    per_id_by_month: dict[int, list[np.ndarray]] = {}
    for r, m, chunk in zip(runs, run_month, miss_month_chunks):
        runs_by_month.setdefault(m, []).append(r)
        if burst_operand == "per-id":
            all_ids = np.arange(r.lo, r.hi + 1, dtype=np.float64)
            for mo in np.unique(chunk):
                per_id_by_month.setdefault(int(mo), []).append(all_ids[chunk == mo])

    rows: list[MonthlyGapStats] = []
    pcts: list[float] = []
    cumulative = 0
    for i in range(n_months):
        mi = first + i
        observed = int(obs_counts[i])
        missing = int(miss_counts[i])
        denom = observed + missing
        pct = missing / denom if denom else 0.0
        pcts.append(pct)
        cumulative += missing
        window = pcts[max(0, i - rolling_window + 1): i + 1]
        if burst_operand == "per-id":
            ids_here = per_id_by_month.get(mi, [])
            positions = np.sort(np.concatenate(ids_here)) if ids_here else np.empty(0)
            n_here = len(runs_by_month.get(mi, []))
            score = burstiness_score(np.diff(positions)) if positions.size >= 2 and n_here >= 2 else None
            b = BurstinessResult(None, n_here, None, None, score)
        else:
            b = burstiness(runs_by_month.get(mi, []), operand=burst_operand)
        rows.append(
            MonthlyGapStats(
                month=month_label(mi),
                month_index=mi,
                observed=observed,
                missing=missing,
                pct_missing=pct,
                rolling_pct=sum(window) / len(window),
                cumulative_missing=cumulative,
                burstiness=b.score,
                n_runs=b.n_runs,
            )
        )
    return rows
