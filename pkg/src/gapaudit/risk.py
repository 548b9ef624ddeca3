"""Per-user exposure to missing data.

With a per-item loss rate r, a user who produced n items faces two risk
estimates of losing at least one of them: the additive union bound
min(1, n*r), and the compound independence model 1 - (1-r)**n. The
additive figure is the headline number; the compound figure is the
tighter model and is always reported alongside. Both assume uniform
missingness, which real corpora only approximate.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ingest import AUTHOR_SENTINEL


class SampleTooLarge(ValueError):
    pass


class EmptyPopulation(ValueError):
    pass


@dataclass(frozen=True)
class MissingRates:
    """Corpus-wide per-item loss rates, missing / (missing + observed) per kind."""

    comments: float
    submissions: float

    def __post_init__(self) -> None:
        for r in (self.comments, self.submissions):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"rate {r} outside [0, 1]")

    @classmethod
    def from_counts(cls, missing_comments, observed_comments, missing_submissions, observed_submissions):
        def rate(m, o):
            return m / (m + o) if (m + o) else 0.0

        return cls(rate(missing_comments, observed_comments), rate(missing_submissions, observed_submissions))


@dataclass(frozen=True)
class UserRiskProfile:
    author: str
    n_comments: int
    n_submissions: int
    comment_additive_risk: float
    comment_compound_risk: float
    submission_additive_risk: float
    submission_compound_risk: float


@dataclass(frozen=True)
class HistogramBucket:
    label: str
    lo: int
    hi: int
    count: int


@dataclass(frozen=True)
class RiskPopulationSummary:
    sample_size: int
    mean_comments: float
    mean_submissions: float
    comment_buckets: list[HistogramBucket]
    submission_buckets: list[HistogramBucket]
    threshold: float
    frac_comment_risk_at_threshold: float
    frac_submission_risk_at_threshold: float
    frac_comment_additive_at_threshold: float
    frac_submission_additive_at_threshold: float


def user_risk(n: float, rate: float) -> tuple[float, float]:
    """(additive, compound) risk of losing at least one of n items.

    additive = min(1, n * rate)   -- union bound
    compound = 1 - (1 - rate)**n  -- exact under independence

    ``n`` may be fractional for population-average queries; per-user
    profiles always use integer counts. For integer n the compound risk
    never exceeds the additive one.
    """
    if n < 0:
        raise ValueError("activity count must be >= 0")
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate {rate} outside [0, 1]")
    additive = min(1.0, n * rate)
    compound = 1.0 - (1.0 - rate) ** n
    return additive, compound


def sample_users(authors: Iterable[str], k: int, seed: int) -> list[str]:
    """Uniform sample of k distinct authors, without replacement.

    The deletion sentinel is excluded (it is not an account). Output is
    sorted and fully determined by the seed.

    Raises SampleTooLarge when fewer than k distinct authors exist.
    """
    distinct = sorted(set(authors) - {AUTHOR_SENTINEL})
    if k > len(distinct):
        raise SampleTooLarge(f"requested {k} of {len(distinct)} distinct authors")
    rng = random.Random(seed)
    return sorted(rng.sample(distinct, k))


def count_activity(authors: Iterable[str]) -> Counter:
    """Per-author record tally for one kind."""
    return Counter(authors)


def build_profiles(
    sample: Sequence[str],
    comment_counts: Mapping[str, int],
    submission_counts: Mapping[str, int],
    rates: MissingRates,
) -> list[UserRiskProfile]:
    """Risk profiles for the sampled accounts, sorted by author."""
    profiles = []
    for author in sorted(sample):
        n_c = int(comment_counts.get(author, 0))
        n_s = int(submission_counts.get(author, 0))
        add_c, comp_c = user_risk(n_c, rates.comments)
        add_s, comp_s = user_risk(n_s, rates.submissions)
        profiles.append(UserRiskProfile(author, n_c, n_s, add_c, comp_c, add_s, comp_s))
    return profiles


def _log_buckets(counts: Sequence[int]) -> list[HistogramBucket]:
    # Decade buckets: {0}, [1, 9], [10, 99], ... — every user lands in exactly one.
    top = max(counts) if counts else 0
    n_decades = len(str(top)) if top > 0 else 0
    buckets = [HistogramBucket("0", 0, 0, sum(1 for c in counts if c == 0))]
    for d in range(n_decades):
        lo, hi = 10**d, 10 ** (d + 1) - 1
        buckets.append(
            HistogramBucket(f"{lo}-{hi}", lo, hi, sum(1 for c in counts if lo <= c <= hi))
        )
    return buckets


def population_summary(profiles: Sequence[UserRiskProfile], threshold: float = 0.5) -> RiskPopulationSummary:
    """Log-histogram of activity counts and the share of users whose risk
    reaches the threshold (inclusive), per kind.

    The compound-risk fraction is the headline number; the additive-risk
    fraction is reported alongside since either model may be wanted.

    Raises EmptyPopulation for an empty profile list.
    """
    if not profiles:
        raise EmptyPopulation("no profiles to summarize")
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside (0, 1]")
    n = len(profiles)
    comment_counts = [p.n_comments for p in profiles]
    submission_counts = [p.n_submissions for p in profiles]
    return RiskPopulationSummary(
        sample_size=n,
        mean_comments=sum(comment_counts) / n,
        mean_submissions=sum(submission_counts) / n,
        comment_buckets=_log_buckets(comment_counts),
        submission_buckets=_log_buckets(submission_counts),
        threshold=threshold,
        frac_comment_risk_at_threshold=sum(1 for p in profiles if p.comment_compound_risk >= threshold) / n,
        frac_submission_risk_at_threshold=sum(1 for p in profiles if p.submission_compound_risk >= threshold) / n,
        frac_comment_additive_at_threshold=sum(1 for p in profiles if p.comment_additive_risk >= threshold) / n,
        frac_submission_additive_at_threshold=sum(1 for p in profiles if p.submission_additive_risk >= threshold) / n,
    )
