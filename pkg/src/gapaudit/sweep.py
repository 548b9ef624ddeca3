"""In-process simulation of the batched sequential-ID collector.

A MockStore answers batched ID lookups the way the platform does: public
and deleted-truncated records come back, private/absent IDs are silently
omitted (no error). A fault decorator suppresses individual lookups with
a deterministic per-(seed, id, attempt) draw, which lets a second sweep
pass over the missed IDs model the gap-refill procedure.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .idcodec import KIND_TO_PREFIX, RecordKind, encode_base36
from .ingest import AUTHOR_SENTINEL
from .synth import CorpusPlan

DEFAULT_BATCH = 100


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def _hash_uniform(seed: int, ids: np.ndarray, attempts: np.ndarray) -> np.ndarray:
    """Deterministic uniforms in [0, 1) from (seed, id, attempt)."""
    h = _splitmix64(np.full(ids.shape, seed, dtype=np.uint64))
    h = _splitmix64(h ^ ids.astype(np.uint64))
    h = _splitmix64(h ^ attempts.astype(np.uint64))
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


class MockStore:
    """Immutable id -> record map for one kind; lookups are batched arrays."""

    def __init__(self, kind: RecordKind, ids: np.ndarray, payload_rows: list[dict]):
        self.kind = kind
        self._ids = ids
        self._rows = payload_rows

    @classmethod
    def from_plan(cls, plan: CorpusPlan, kind: RecordKind) -> "MockStore":
        subs, auths = plan.subreddit_names, plan.author_names
        rows: list[dict] = []
        ids_parts: list[np.ndarray] = []
        if kind is RecordKind.COMMENT:
            for block in plan.comment_blocks():
                ids_parts.append(block.ids)
                for i in range(block.ids.size):
                    b36 = encode_base36(int(block.ids[i]))
                    deleted = bool(block.deleted[i])
                    pfx = KIND_TO_PREFIX[RecordKind.COMMENT if block.parent_is_comment[i] else RecordKind.SUBMISSION]
                    rows.append({
                        "id": b36,
                        "parent_id": f"{pfx}_{encode_base36(int(block.parent_values[i]))}",
                        "link_id": f"t3_{encode_base36(int(block.link_values[i]))}",
                        "author": AUTHOR_SENTINEL if deleted else auths[int(block.author_codes[i])],
                        "subreddit": subs[int(block.subreddit_codes[i])],
                        "created_utc": int(block.created_utc[i]),
                        "body": "[deleted]" if deleted else f"c-{b36}",
                    })
        else:
            for block in plan.submission_blocks():
                ids_parts.append(block.ids)
                for i in range(block.ids.size):
                    b36 = encode_base36(int(block.ids[i]))
                    deleted = bool(block.deleted[i])
                    rows.append({
                        "id": b36,
                        "author": AUTHOR_SENTINEL if deleted else auths[int(block.author_codes[i])],
                        "subreddit": subs[int(block.subreddit_codes[i])],
                        "created_utc": int(block.created_utc[i]),
                        "title": f"s-{b36}",
                        "selftext": "[deleted]" if deleted else f"body-{b36}",
                    })
        ids = np.concatenate(ids_parts) if ids_parts else np.empty(0, dtype=np.int64)
        return cls(kind, ids, rows)

    @property
    def n_visible(self) -> int:
        return int(self._ids.size)

    @property
    def visible_ids(self) -> np.ndarray:
        return self._ids

    def fetch(self, requested: np.ndarray) -> tuple[np.ndarray, list[dict]]:
        """Return (found id values, record payloads); absent IDs are omitted silently."""
        requested = np.asarray(requested, dtype=np.int64)
        if self._ids.size == 0 or requested.size == 0:
            return np.empty(0, dtype=np.int64), []
        pos = np.searchsorted(self._ids, requested)
        pos_safe = np.minimum(pos, self._ids.size - 1)
        found = (pos < self._ids.size) & (self._ids[pos_safe] == requested)
        hit_pos = pos_safe[found]
        return requested[found], [self._rows[int(p)] for p in hit_pos]


class FaultyStore:
    """Store decorator that drops each lookup with probability drop_rate.

    The draw is a pure function of (seed, id, attempt number for that id),
    so a run is reproducible while a re-sweep pass gets fresh draws for
    the IDs it retries.
    """

    def __init__(self, inner: MockStore, drop_rate: float, seed: int):
        if not 0.0 <= drop_rate < 1.0:
            raise ValueError(f"drop_rate {drop_rate} outside [0, 1)")
        self.inner = inner
        self.kind = inner.kind
        self.drop_rate = drop_rate
        self.seed = seed
        self._attempts: dict[int, int] = {}

    def fetch(self, requested: np.ndarray) -> tuple[np.ndarray, list[dict]]:
        requested = np.asarray(requested, dtype=np.int64)
        if self.drop_rate == 0.0:
            return self.inner.fetch(requested)
        attempts = np.empty(requested.size, dtype=np.int64)
        for i, v in enumerate(requested.tolist()):
            a = self._attempts.get(v, 0)
            attempts[i] = a
            self._attempts[v] = a + 1
        keep = _hash_uniform(self.seed, requested, attempts) >= self.drop_rate
        return self.inner.fetch(requested[keep])


def inject_faults(store: MockStore, drop_rate: float, seed: int) -> FaultyStore | MockStore:
    """Wrap a store with deterministic transient-miss behavior (identity at rate 0)."""
    if drop_rate == 0.0:
        return store
    return FaultyStore(store, drop_rate, seed)


@dataclass(frozen=True)
class BatchLog:
    lo: int
    hi: int
    requested: int
    found: int


@dataclass(frozen=True)
class SweepLog:
    batch_size: int
    workers: int
    batches: list[BatchLog]
    requested: int
    returned: int


@dataclass(frozen=True)
class SweepResult:
    found_ids: np.ndarray
    records: list[dict]
    log: SweepLog


def sweep(
    store,
    lo: int | None = None,
    hi: int | None = None,
    ids=None,
    batch: int = DEFAULT_BATCH,
    workers: int = 1,
) -> SweepResult:
    """Request every ID in [lo, hi] (or an explicit id array) in fixed-size batches.

    Each ID is requested exactly once per sweep; results are assembled in
    batch order, so the output is identical for any worker count.
    """
    if batch < 1:
        raise ValueError("batch size must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if ids is None:
        if lo is None or hi is None or lo > hi:
            raise ValueError("need an id array or a non-empty [lo, hi] range")
        ids = np.arange(lo, hi + 1, dtype=np.int64)
    else:
        ids = np.asarray(ids, dtype=np.int64)
    chunks = [ids[i: i + batch] for i in range(0, ids.size, batch)]

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(store.fetch, chunks))
    else:
        results = [store.fetch(c) for c in chunks]

    batches = [
        BatchLog(int(c[0]), int(c[-1]), int(c.size), int(found.size))
        for c, (found, _) in zip(chunks, results)
    ]
    found_ids = np.concatenate([f for f, _ in results]) if results else np.empty(0, dtype=np.int64)
    records: list[dict] = []
    for _, rows in results:
        records.extend(rows)
    return SweepResult(
        found_ids=found_ids,
        records=records,
        log=SweepLog(batch, workers, batches, int(ids.size), int(found_ids.size)),
    )
