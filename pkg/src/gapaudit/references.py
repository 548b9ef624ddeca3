"""Dangling-reference audit: references from observed comments to absent targets.

A comment carries two references: its parent (another comment or the
submission) and its link (always a submission). Any referenced ID with no
record in the corpus is a dangling reference; the target demonstrably
existed, so these are the directly provable missing records. Danglings
are attributed to the referencing comment's subreddit because the missing
object's own subreddit is unknowable.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .idcodec import RecordKind
from .ingest import CommentColumns, CommentRecord
from .intervals import IdIntervalSet


class UnknownSubreddit(KeyError):
    pass


@dataclass(frozen=True)
class SubredditDangling:
    """Distinct dangling targets referenced from one subreddit, plus edge count."""

    submissions: int = 0
    comments: int = 0
    edges: int = 0


@dataclass(frozen=True)
class DanglingReport:
    dangling_comment_refs: int
    dangling_submission_refs: int
    referencing_edges: int
    anomalous_references: int
    per_subreddit: dict[str, SubredditDangling]
    comments_by_subreddit: dict[str, int]
    total_comments: int
    comment_target_ids: np.ndarray
    submission_target_ids: np.ndarray


class ReferenceAuditor:
    """Accumulates dangling references; partial auditors merge associatively.

    Membership tests run against the pre-built observed interval sets, so
    a worker only needs read-only views of those plus its own tallies.
    """

    def __init__(self, observed_comments: IdIntervalSet, observed_submissions: IdIntervalSet):
        self.observed_comments = observed_comments
        self.observed_submissions = observed_submissions
        self._targets = {RecordKind.COMMENT: set(), RecordKind.SUBMISSION: set()}
        self._per_sub_targets: dict[str, dict[RecordKind, set]] = defaultdict(
            lambda: {RecordKind.COMMENT: set(), RecordKind.SUBMISSION: set()}
        )
        self._per_sub_edges: Counter = Counter()
        self._comments_per_sub: Counter = Counter()
        self._edges = 0
        self._anomalies = 0
        self._total_comments = 0

    # -- accumulation --------------------------------------------------

    def add_arrays(
        self,
        ids: np.ndarray,
        parent_values: np.ndarray,
        parent_is_comment: np.ndarray,
        link_values: np.ndarray,
        subreddit_codes: np.ndarray,
        subreddit_names: list[str],
    ) -> None:
        n = int(ids.size)
        if n == 0:
            return
        self._total_comments += n
        counts = np.bincount(subreddit_codes, minlength=len(subreddit_names))
        for code, c in enumerate(counts.tolist()):
            if c:
                self._comments_per_sub[subreddit_names[code]] += c

        # References are unidirectional within the comment sequence: a parent
        # comment must precede its child. Cross-kind values are incomparable.
        self._anomalies += int(np.sum(parent_is_comment & (parent_values >= ids)))

        link_missing = ~self.observed_submissions.contains_many(link_values)
        self._record_edges(RecordKind.SUBMISSION, link_values, link_missing, subreddit_codes, subreddit_names)

        in_com = self.observed_comments.contains_many(parent_values)
        in_sub = self.observed_submissions.contains_many(parent_values)
        parent_missing = np.where(parent_is_comment, ~in_com, ~in_sub)
        self._record_edges(
            RecordKind.COMMENT, parent_values, parent_missing & parent_is_comment, subreddit_codes, subreddit_names
        )
        self._record_edges(
            RecordKind.SUBMISSION, parent_values, parent_missing & ~parent_is_comment, subreddit_codes, subreddit_names
        )

    def _record_edges(self, kind, values, mask, sub_codes, sub_names) -> None:
        hits = int(mask.sum())
        if not hits:
            return
        self._edges += hits
        targets = self._targets[kind]
        for v, code in zip(values[mask].tolist(), sub_codes[mask].tolist()):
            targets.add(v)
            name = sub_names[code]
            self._per_sub_targets[name][kind].add(v)
            self._per_sub_edges[name] += 1

    def add_records(self, records: Iterable[CommentRecord], chunk: int = 65536) -> None:
        buf: list[CommentRecord] = []
        for r in records:
            buf.append(r)
            if len(buf) >= chunk:
                self._flush_records(buf)
                buf = []
        if buf:
            self._flush_records(buf)

    def _flush_records(self, buf: list[CommentRecord]) -> None:
        names: list[str] = []
        index: dict[str, int] = {}
        codes = np.empty(len(buf), dtype=np.int64)
        for i, r in enumerate(buf):
            c = index.get(r.subreddit)
            if c is None:
                c = len(names)
                index[r.subreddit] = c
                names.append(r.subreddit)
            codes[i] = c
        self.add_arrays(
            ids=np.array([r.id.value for r in buf], dtype=np.int64),
            parent_values=np.array([r.parent.value for r in buf], dtype=np.int64),
            parent_is_comment=np.array([r.parent.kind is RecordKind.COMMENT for r in buf], dtype=bool),
            link_values=np.array([r.link.value for r in buf], dtype=np.int64),
            subreddit_codes=codes,
            subreddit_names=names,
        )

    def add_columns(self, cols: CommentColumns) -> None:
        self.add_arrays(
            cols.ids, cols.parent_values, cols.parent_is_comment,
            cols.link_values, cols.subreddit_codes, cols.subreddit_names,
        )

    # -- merge / report -------------------------------------------------

    def merge(self, other: "ReferenceAuditor") -> "ReferenceAuditor":
        for kind in self._targets:
            self._targets[kind] |= other._targets[kind]
        for name, kinds in other._per_sub_targets.items():
            mine = self._per_sub_targets[name]
            mine[RecordKind.COMMENT] |= kinds[RecordKind.COMMENT]
            mine[RecordKind.SUBMISSION] |= kinds[RecordKind.SUBMISSION]
        self._per_sub_edges.update(other._per_sub_edges)
        self._comments_per_sub.update(other._comments_per_sub)
        self._edges += other._edges
        self._anomalies += other._anomalies
        self._total_comments += other._total_comments
        return self

    def report(self) -> DanglingReport:
        per_sub = {}
        for name in sorted(set(self._per_sub_targets) | set(self._comments_per_sub)):
            kinds = self._per_sub_targets.get(name)
            if kinds is None:
                per_sub[name] = SubredditDangling()
            else:
                per_sub[name] = SubredditDangling(
                    submissions=len(kinds[RecordKind.SUBMISSION]),
                    comments=len(kinds[RecordKind.COMMENT]),
                    edges=self._per_sub_edges[name],
                )
        return DanglingReport(
            dangling_comment_refs=len(self._targets[RecordKind.COMMENT]),
            dangling_submission_refs=len(self._targets[RecordKind.SUBMISSION]),
            referencing_edges=self._edges,
            anomalous_references=self._anomalies,
            per_subreddit=per_sub,
            comments_by_subreddit={k: self._comments_per_sub[k] for k in sorted(self._comments_per_sub)},
            total_comments=self._total_comments,
            comment_target_ids=np.array(sorted(self._targets[RecordKind.COMMENT]), dtype=np.int64),
            submission_target_ids=np.array(sorted(self._targets[RecordKind.SUBMISSION]), dtype=np.int64),
        )


def audit_references(
    comments: Iterable[CommentRecord] | CommentColumns,
    observed_comments: IdIntervalSet,
    observed_submissions: IdIntervalSet,
) -> DanglingReport:
    """Membership-test every comment's parent and link against the observed sets."""
    auditor = ReferenceAuditor(observed_comments, observed_submissions)
    if isinstance(comments, CommentColumns):
        auditor.add_columns(comments)
    else:
        auditor.add_records(comments)
    return auditor.report()


def community_dangling_profile(report: DanglingReport, subreddit: str) -> tuple[int, int, float]:
    """One community's dangling submissions, its comment total, and its share
    of all distinct dangling submissions corpus-wide."""
    known = subreddit in report.comments_by_subreddit or subreddit in report.per_subreddit
    if not known:
        raise UnknownSubreddit(subreddit)
    entry = report.per_subreddit.get(subreddit, SubredditDangling())
    total_comments = report.comments_by_subreddit.get(subreddit, 0)
    denom = report.dangling_submission_refs
    fraction = entry.submissions / denom if denom else 0.0
    return entry.submissions, total_comments, fraction
