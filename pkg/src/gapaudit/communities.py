"""Per-community missingness aggregation and the size/age regression.

Dangling references are the only missing content attributable to a
community (an unreferenced missing ID carries no subreddit), so the
community-level missing share for a kind is
dangling / (dangling + observed). The regression asks how much of the
variation in missing content per community is explained by its total
known content and by when it first appears in the corpus.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .ingest import CommentColumns, SubmissionColumns
from .references import DanglingReport, SubredditDangling
from .temporal import month_index_of

TRANSFORMS = ("log10p1", "raw")


class RankDeficient(ValueError):
    """Design matrix has linearly dependent columns."""


class TooFewObservations(ValueError):
    """Not enough rows for the requested number of coefficients."""


@dataclass(frozen=True)
class CommunityGapStats:
    subreddit: str
    observed_comments: int
    observed_submissions: int
    dangling_comments: int
    dangling_submissions: int
    created_month: int
    pct_missing_comments: float
    pct_missing_submissions: float


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit summary; coefficient order is predictors first, intercept last."""

    names: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    stars: tuple[str, ...]
    r_squared: float
    adj_r_squared: float
    n_observations: int
    dof: int
    dropped_predictors: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThresholdReport:
    threshold_pct: float
    communities_over_threshold_comments: int
    communities_over_threshold_submissions: int
    communities_with_any_dangling: int
    mean_missing_share_comments: float
    mean_missing_share_submissions: float


def _pct(dangling: int, observed: int) -> float:
    total = dangling + observed
    return dangling / total if total else 0.0


def aggregate_communities(
    comments: CommentColumns,
    submissions: SubmissionColumns,
    dangling_report: DanglingReport,
) -> list[CommunityGapStats]:
    """One row per subreddit appearing anywhere in the corpus, sorted by name.

    created_month is the month of the community's earliest observed record —
    a proxy for creation time, since true creation dates are not in the dumps.
    """
    earliest: dict[str, int] = {}
    obs_c: dict[str, int] = {}
    obs_s: dict[str, int] = {}

    for cols, store in ((comments, obs_c), (submissions, obs_s)):
        if len(cols) == 0:
            continue
        months = month_index_of(cols.created_utc)
        counts = np.bincount(cols.subreddit_codes, minlength=len(cols.subreddit_names))
        for code, name in enumerate(cols.subreddit_names):
            if counts[code]:
                store[name] = store.get(name, 0) + int(counts[code])
                first = int(months[cols.subreddit_codes == code].min())
                earliest[name] = min(earliest.get(name, first), first)

    names = sorted(set(obs_c) | set(obs_s) | set(dangling_report.per_subreddit))
    rows = []
    for name in names:
        entry = dangling_report.per_subreddit.get(name, SubredditDangling())
        oc, os_ = obs_c.get(name, 0), obs_s.get(name, 0)
        rows.append(
            CommunityGapStats(
                subreddit=name,
                observed_comments=oc,
                observed_submissions=os_,
                dangling_comments=entry.comments,
                dangling_submissions=entry.submissions,
                created_month=earliest.get(name, 0),
                pct_missing_comments=_pct(entry.comments, oc),
                pct_missing_submissions=_pct(entry.submissions, os_),
            )
        )
    return rows


def ols_fit(y, X, names: Sequence[str] | None = None) -> RegressionFit:
    """Ordinary least squares via the normal equations.

    Parameters
    ----------
    y : array, shape (n,)
        Outcome vector.
    X : array, shape (n, k)
        Predictor columns; an intercept column is appended internally.
    names : sequence of str, optional
        Predictor names for reporting (intercept named "intercept").

    Returns
    -------
    RegressionFit
        beta = (X'X)^{-1} X'y, homoskedastic standard errors
        sqrt(diag(s2 (X'X)^{-1})) with s2 = RSS/(n-p), R^2 and adjusted
        R^2, and two-sided p-values from the t distribution on n-p
        degrees of freedom. Stars: * p<0.1, ** p<0.05, *** p<0.01.

    Raises
    ------
    TooFewObservations
        If n <= k + 1 (no residual degrees of freedom).
    RankDeficient
        If the design matrix (with intercept) is not full rank.
    """
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    p = k + 1
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, expected ({n},)")
    if n <= p:
        raise TooFewObservations(f"{n} observations cannot support {p} coefficients")
    design = np.column_stack([X, np.ones(n)])
    if np.linalg.matrix_rank(design) < p:
        raise RankDeficient("design matrix (with intercept) is rank deficient")

    xtx = design.T @ design
    beta = np.linalg.solve(xtx, design.T @ y)
    resid = y - design @ beta
    dof = n - p
    rss = float(resid @ resid)
    s2 = rss / dof
    cov = s2 * np.linalg.inv(xtx)
    se = np.sqrt(np.diag(cov))
    tvals = np.divide(beta, se, out=np.zeros_like(beta), where=se > 0)
    pvals = 2.0 * _scipy_stats.t.sf(np.abs(tvals), dof)

    tss = float(np.sum((y - y.mean()) ** 2))
    if tss > 0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= 1e-12 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / dof

    def star(pv: float) -> str:
        if pv < 0.01:
            return "***"
        if pv < 0.05:
            return "**"
        if pv < 0.1:
            return "*"
        return ""

    if names is None:
        names = tuple(f"x{i + 1}" for i in range(k))
    return RegressionFit(
        names=tuple(names) + ("intercept",),
        coefficients=beta,
        std_errors=se,
        t_values=tvals,
        p_values=pvals,
        stars=tuple(star(float(pv)) for pv in pvals),
        r_squared=r2,
        adj_r_squared=adj_r2,
        n_observations=n,
        dof=dof,
    )


def fit_missingness_model(
    rows: Sequence[CommunityGapStats],
    kind: str,
    transform: str = "log10p1",
) -> RegressionFit:
    """Regress a kind's dangling count on total known content and created month.

    ``transform`` applies log10(1+x) to the dangling count and the content
    total (counts span many orders of magnitude); ``raw`` leaves them as-is.
    The created-month index always enters untransformed.
    """
    if kind not in ("comment", "submission"):
        raise ValueError(f"kind must be comment or submission, got {kind!r}")
    if transform not in TRANSFORMS:
        raise ValueError(f"transform must be one of {TRANSFORMS}")
    dangling = np.array(
        [r.dangling_comments if kind == "comment" else r.dangling_submissions for r in rows],
        dtype=np.float64,
    )
    content = np.array([r.observed_comments + r.observed_submissions for r in rows], dtype=np.float64)
    created = np.array([r.created_month for r in rows], dtype=np.float64)
    if transform == "log10p1":
        y = np.log10(1.0 + dangling)
        content = np.log10(1.0 + content)
    else:
        y = dangling
    X = np.column_stack([content, created])
    names = ("total_content", "created_month")
    # a predictor constant across communities (e.g. a single-month corpus) is
    # collinear with the intercept; drop it and say so instead of failing
    varying = np.ptp(X, axis=0) > 0
    if not varying.all():
        dropped = tuple(n for n, keep in zip(names, varying) if not keep)
        kept = tuple(n for n, keep in zip(names, varying) if keep)
        if not kept:
            raise RankDeficient("all predictors are constant across communities")
        fit = ols_fit(y, X[:, varying], names=kept)
        return RegressionFit(
            names=fit.names,
            coefficients=fit.coefficients,
            std_errors=fit.std_errors,
            t_values=fit.t_values,
            p_values=fit.p_values,
            stars=fit.stars,
            r_squared=fit.r_squared,
            adj_r_squared=fit.adj_r_squared,
            n_observations=fit.n_observations,
            dof=fit.dof,
            dropped_predictors=dropped,
        )
    return ols_fit(y, X, names=names)


def threshold_report(rows: Sequence[CommunityGapStats], pct: float) -> ThresholdReport:
    """Communities at or above a missing share (inclusive, "at least"), and the
    mean missing share among communities with any dangling reference."""
    if not 0.0 < pct < 1.0:
        raise ValueError(f"threshold pct {pct} outside (0, 1)")
    with_dangling = [r for r in rows if r.dangling_comments + r.dangling_submissions > 0]
    n_d = len(with_dangling)
    return ThresholdReport(
        threshold_pct=pct,
        communities_over_threshold_comments=sum(1 for r in rows if r.pct_missing_comments >= pct),
        communities_over_threshold_submissions=sum(1 for r in rows if r.pct_missing_submissions >= pct),
        communities_with_any_dangling=n_d,
        mean_missing_share_comments=sum(r.pct_missing_comments for r in with_dangling) / n_d if n_d else 0.0,
        mean_missing_share_submissions=sum(r.pct_missing_submissions for r in with_dangling) / n_d if n_d else 0.0,
    )
