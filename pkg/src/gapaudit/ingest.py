"""Streaming ingestion of newline-delimited JSON dump shards.

Each line is one record object. Only the audit-relevant fields are
extracted; everything else is tolerated and ignored. Deleted records
(author or body replaced by a deletion sentinel) still occupy their ID
and count as observed. Shards can be read concurrently and their
results merged associatively, so ingest order never matters.
"""
from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .idcodec import RecordId, RecordKind, decode_base36, parse_fullname

AUTHOR_SENTINEL = "[deleted]"
BODY_SENTINELS = ("[deleted]", "[removed]")


class IngestError(Exception):
    pass


class MalformedLine(IngestError):
    """A line failed to parse (strict mode only; lenient mode counts and skips)."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class WrongKind(IngestError):
    """A fullname prefix contradicts the shard's declared record kind."""


@dataclass(frozen=True, slots=True)
class CommentRecord:
    id: RecordId
    parent: RecordId
    link: RecordId
    author: str
    subreddit: str
    created_utc: int
    is_deleted: bool


@dataclass(frozen=True, slots=True)
class SubmissionRecord:
    id: RecordId
    author: str
    subreddit: str
    created_utc: int
    is_deleted: bool


@dataclass
class IngestStats:
    lines_read: int = 0
    records_ok: int = 0
    records_malformed: int = 0
    deleted_count: int = 0
    deleted_author_sentinel: int = 0
    deleted_body_sentinel: int = 0
    min_id: int | None = None
    max_id: int | None = None
    min_ts: int | None = None
    max_ts: int | None = None


def merge_stats(a: IngestStats, b: IngestStats) -> IngestStats:
    """Combine two shard tallies; associative and commutative with identity IngestStats()."""

    def _min(x, y):
        return y if x is None else x if y is None else min(x, y)

    def _max(x, y):
        return y if x is None else x if y is None else max(x, y)

    return IngestStats(
        lines_read=a.lines_read + b.lines_read,
        records_ok=a.records_ok + b.records_ok,
        records_malformed=a.records_malformed + b.records_malformed,
        deleted_count=a.deleted_count + b.deleted_count,
        deleted_author_sentinel=a.deleted_author_sentinel + b.deleted_author_sentinel,
        deleted_body_sentinel=a.deleted_body_sentinel + b.deleted_body_sentinel,
        min_id=_min(a.min_id, b.min_id),
        max_id=_max(a.max_id, b.max_id),
        min_ts=_min(a.min_ts, b.min_ts),
        max_ts=_max(a.max_ts, b.max_ts),
    )


def _parse_created(value) -> int:
    ts = int(float(value))
    if ts <= 0:
        raise ValueError(f"created_utc {value!r} not positive")
    return ts


def _parse_own_id(raw: str, kind: RecordKind) -> RecordId:
    # Dump files store the record's own id bare; references carry the tN_ prefix.
    if "_" in raw:
        rid = parse_fullname(raw)
        if rid.kind is not kind:
            raise WrongKind(f"id {raw!r} contradicts declared kind {kind.value}")
        return rid
    return RecordId(kind, decode_base36(raw))


class ShardIngest:
    """Single-pass reader over one shard; ``stats`` is final once iteration ends."""

    def __init__(
        self,
        source: str | Path | io.TextIOBase,
        kind: RecordKind,
        mode: str = "lenient",
    ):
        if mode not in ("strict", "lenient"):
            raise ValueError(f"unknown ingest mode {mode!r}")
        self.source = source
        self.kind = kind
        self.mode = mode
        self.stats = IngestStats()

    def __iter__(self) -> Iterator[CommentRecord | SubmissionRecord]:
        if isinstance(self.source, (str, Path)):
            with open(self.source, "r", encoding="utf-8") as fh:
                yield from self._read(fh)
        else:
            yield from self._read(self.source)

    def _read(self, fh) -> Iterator[CommentRecord | SubmissionRecord]:
        stats = self.stats
        strict = self.mode == "strict"
        for line_no, line in enumerate(fh, start=1):
            if line.endswith("\n"):
                line = line[:-1]
            stats.lines_read += 1
            try:
                record = self._parse_line(line)
            except WrongKind:
                if strict:
                    raise
                stats.records_malformed += 1
                continue
            except (ValueError, KeyError, TypeError) as exc:
                if strict:
                    raise MalformedLine(line_no, str(exc)) from exc
                stats.records_malformed += 1
                continue
            stats.records_ok += 1
            v = record.id.value
            stats.min_id = v if stats.min_id is None else min(stats.min_id, v)
            stats.max_id = v if stats.max_id is None else max(stats.max_id, v)
            t = record.created_utc
            stats.min_ts = t if stats.min_ts is None else min(stats.min_ts, t)
            stats.max_ts = t if stats.max_ts is None else max(stats.max_ts, t)
            if record.is_deleted:
                stats.deleted_count += 1
            yield record

    def _parse_line(self, line: str) -> CommentRecord | SubmissionRecord:
        obj = json.loads(line)
        if not isinstance(obj, dict):
            raise ValueError("line is not a JSON object")
        rid = _parse_own_id(str(obj["id"]), self.kind)
        author = str(obj["author"])
        subreddit = str(obj["subreddit"])
        created = _parse_created(obj["created_utc"])

        body_key = "body" if self.kind is RecordKind.COMMENT else "selftext"
        body = obj.get(body_key)
        by_author = author == AUTHOR_SENTINEL
        by_body = isinstance(body, str) and body in BODY_SENTINELS
        if by_author:
            self.stats.deleted_author_sentinel += 1
        if by_body:
            self.stats.deleted_body_sentinel += 1
        is_deleted = by_author or by_body

        if self.kind is RecordKind.SUBMISSION:
            return SubmissionRecord(rid, author, subreddit, created, is_deleted)

        parent = parse_fullname(str(obj["parent_id"]))
        link = parse_fullname(str(obj["link_id"]))
        if link.kind is not RecordKind.SUBMISSION:
            raise WrongKind(f"link_id {obj['link_id']!r} is not a submission fullname")
        return CommentRecord(rid, parent, link, author, subreddit, created, is_deleted)


def ingest_shard(
    source: str | Path | io.TextIOBase,
    kind: RecordKind,
    mode: str = "lenient",
) -> ShardIngest:
    """Open one shard for streaming; iterate the result to consume records."""
    return ShardIngest(source, kind, mode)


# -- columnar accumulation -------------------------------------------------
#
# Desk-scale analyses want the whole corpus as flat arrays. Columns are the
# per-shard partial result; concat() is the associative merge.


class _Vocab:
    def __init__(self) -> None:
        self.index: dict[str, int] = {}
        self.names: list[str] = []

    def code(self, name: str) -> int:
        idx = self.index.get(name)
        if idx is None:
            idx = len(self.names)
            self.index[name] = idx
            self.names.append(name)
        return idx


def _remap(parts_names: list[list[str]], parts_codes: list[np.ndarray]) -> tuple[np.ndarray, list[str]]:
    vocab = _Vocab()
    remapped = []
    for names, codes in zip(parts_names, parts_codes):
        lut = np.array([vocab.code(n) for n in names], dtype=np.int64) if names else np.empty(0, dtype=np.int64)
        remapped.append(lut[codes] if codes.size else codes)
    combined = np.concatenate(remapped) if remapped else np.empty(0, dtype=np.int64)
    return combined, vocab.names


@dataclass
class CommentColumns:
    ids: np.ndarray
    created_utc: np.ndarray
    parent_values: np.ndarray
    parent_is_comment: np.ndarray
    link_values: np.ndarray
    subreddit_codes: np.ndarray
    subreddit_names: list[str]
    author_codes: np.ndarray
    author_names: list[str]
    deleted: np.ndarray
    stats: IngestStats

    def __len__(self) -> int:
        return int(self.ids.size)

    @classmethod
    def from_records(cls, records: Iterable[CommentRecord], stats: IngestStats | None = None) -> "CommentColumns":
        subs, authors = _Vocab(), _Vocab()
        ids, ts, pv, pc, lv, sc, ac, dl = [], [], [], [], [], [], [], []
        for r in records:
            ids.append(r.id.value)
            ts.append(r.created_utc)
            pv.append(r.parent.value)
            pc.append(r.parent.kind is RecordKind.COMMENT)
            lv.append(r.link.value)
            sc.append(subs.code(r.subreddit))
            ac.append(authors.code(r.author))
            dl.append(r.is_deleted)
        return cls(
            ids=np.asarray(ids, dtype=np.int64),
            created_utc=np.asarray(ts, dtype=np.int64),
            parent_values=np.asarray(pv, dtype=np.int64),
            parent_is_comment=np.asarray(pc, dtype=bool),
            link_values=np.asarray(lv, dtype=np.int64),
            subreddit_codes=np.asarray(sc, dtype=np.int64),
            subreddit_names=subs.names,
            author_codes=np.asarray(ac, dtype=np.int64),
            author_names=authors.names,
            deleted=np.asarray(dl, dtype=bool),
            stats=stats if stats is not None else IngestStats(),
        )

    @classmethod
    def concat(cls, parts: Sequence["CommentColumns"]) -> "CommentColumns":
        if len(parts) == 1:
            return parts[0]
        if not parts:
            return cls.from_records([])
        sub_codes, sub_names = _remap([p.subreddit_names for p in parts], [p.subreddit_codes for p in parts])
        auth_codes, auth_names = _remap([p.author_names for p in parts], [p.author_codes for p in parts])
        stats = IngestStats()
        for p in parts:
            stats = merge_stats(stats, p.stats)
        return cls(
            ids=np.concatenate([p.ids for p in parts]),
            created_utc=np.concatenate([p.created_utc for p in parts]),
            parent_values=np.concatenate([p.parent_values for p in parts]),
            parent_is_comment=np.concatenate([p.parent_is_comment for p in parts]),
            link_values=np.concatenate([p.link_values for p in parts]),
            subreddit_codes=sub_codes,
            subreddit_names=sub_names,
            author_codes=auth_codes,
            author_names=auth_names,
            deleted=np.concatenate([p.deleted for p in parts]),
            stats=stats,
        )


@dataclass
class SubmissionColumns:
    ids: np.ndarray
    created_utc: np.ndarray
    subreddit_codes: np.ndarray
    subreddit_names: list[str]
    author_codes: np.ndarray
    author_names: list[str]
    deleted: np.ndarray
    stats: IngestStats

    def __len__(self) -> int:
        return int(self.ids.size)

    @classmethod
    def from_records(cls, records: Iterable[SubmissionRecord], stats: IngestStats | None = None) -> "SubmissionColumns":
        subs, authors = _Vocab(), _Vocab()
        ids, ts, sc, ac, dl = [], [], [], [], []
        for r in records:
            ids.append(r.id.value)
            ts.append(r.created_utc)
            sc.append(subs.code(r.subreddit))
            ac.append(authors.code(r.author))
            dl.append(r.is_deleted)
        return cls(
            ids=np.asarray(ids, dtype=np.int64),
            created_utc=np.asarray(ts, dtype=np.int64),
            subreddit_codes=np.asarray(sc, dtype=np.int64),
            subreddit_names=subs.names,
            author_codes=np.asarray(ac, dtype=np.int64),
            author_names=authors.names,
            deleted=np.asarray(dl, dtype=bool),
            stats=stats if stats is not None else IngestStats(),
        )

    @classmethod
    def concat(cls, parts: Sequence["SubmissionColumns"]) -> "SubmissionColumns":
        if len(parts) == 1:
            return parts[0]
        if not parts:
            return cls.from_records([])
        sub_codes, sub_names = _remap([p.subreddit_names for p in parts], [p.subreddit_codes for p in parts])
        auth_codes, auth_names = _remap([p.author_names for p in parts], [p.author_codes for p in parts])
        stats = IngestStats()
        for p in parts:
            stats = merge_stats(stats, p.stats)
        return cls(
            ids=np.concatenate([p.ids for p in parts]),
            created_utc=np.concatenate([p.created_utc for p in parts]),
            subreddit_codes=sub_codes,
            subreddit_names=sub_names,
            author_codes=auth_codes,
            author_names=auth_names,
            deleted=np.concatenate([p.deleted for p in parts]),
            stats=stats,
        )


def load_columns(
    sources: Sequence[str | Path | io.TextIOBase],
    kind: RecordKind,
    mode: str = "lenient",
    workers: int = 1,
) -> CommentColumns | SubmissionColumns:
    """Ingest shards (optionally in parallel) and merge into one column bundle.

    Partial results merge in source order, so output is identical for any
    worker count.
    """
    cols_cls = CommentColumns if kind is RecordKind.COMMENT else SubmissionColumns

    def one(source):
        shard = ShardIngest(source, kind, mode)
        return cols_cls.from_records(iter(shard), stats=None), shard

    if workers > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, sources))
    else:
        results = [one(s) for s in sources]
    parts = []
    for cols, shard in results:
        cols.stats = shard.stats
        parts.append(cols)
    if not parts:
        return cols_cls.from_records([])
    return cols_cls.concat(parts)
