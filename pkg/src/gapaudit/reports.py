"""Report payload builders and deterministic file writers.

Reports are plain JSON and CSV so they can be diffed, versioned and
plotted downstream. Serialization is byte-stable: sorted JSON keys, fixed
separators, LF line endings, no wall-clock fields.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .census import CensusResult
from .communities import CommunityGapStats, RegressionFit, ThresholdReport
from .references import DanglingReport
from .risk import RiskPopulationSummary, UserRiskProfile
from .temporal import MonthlyGapStats


def dump_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def dump_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


# -- census -----------------------------------------------------------------


def census_json(result: CensusResult, kind: str, candidates=None, duplicates: int | None = None) -> dict:
    out = {
        "kind": kind,
        "range": [result.lo, result.hi],
        "observed": result.observed_in_range,
        "excluded": result.excluded_in_range,
        "missing_total": result.total_missing,
        "runs": [{"lo": lo, "hi": hi, "len": hi - lo + 1} for lo, hi in result.runs],
        "pre_range_unobserved": result.pre_range_unobserved,
        "post_range_unobserved": result.post_range_unobserved,
    }
    if duplicates is not None:
        out["duplicate_observed_ids"] = duplicates
    if candidates is not None:
        out["discontinuity_candidates"] = [
            {"lo": c.lo, "hi": c.hi, "len": c.hi - c.lo + 1, "label": c.label} for c in candidates
        ]
    return out


def census_runs_rows(result: CensusResult) -> list[list]:
    return [[lo, hi, hi - lo + 1] for lo, hi in result.runs]


# -- dangling references ------------------------------------------------------


def dangling_json(report: DanglingReport) -> dict:
    return {
        "dangling_comment_refs": report.dangling_comment_refs,
        "dangling_submission_refs": report.dangling_submission_refs,
        "referencing_edges": report.referencing_edges,
        "anomalous_references": report.anomalous_references,
        "total_comments": report.total_comments,
    }


def dangling_subreddit_rows(report: DanglingReport) -> list[list]:
    return [
        [name, entry.submissions, entry.comments, entry.edges]
        for name, entry in sorted(report.per_subreddit.items())
    ]


DANGLING_CSV_HEADER = ["subreddit", "dangling_submissions", "dangling_comments", "edges"]


# -- temporal ------------------------------------------------------------------

TEMPORAL_CSV_HEADER = [
    "month", "observed", "missing", "pct_missing", "rolling_pct",
    "cumulative_missing", "burstiness_B", "n_runs",
]


def temporal_rows(stats: Sequence[MonthlyGapStats]) -> list[list[str]]:
    return [
        [
            row.month, str(row.observed), str(row.missing), _fmt(row.pct_missing),
            _fmt(row.rolling_pct), str(row.cumulative_missing), _fmt(row.burstiness), str(row.n_runs),
        ]
        for row in stats
    ]


# -- users ---------------------------------------------------------------------

USERS_CSV_HEADER = [
    "author", "n_comments", "n_submissions",
    "comment_additive_risk", "comment_compound_risk",
    "submission_additive_risk", "submission_compound_risk",
]


def user_rows(profiles: Sequence[UserRiskProfile], display_names: dict[str, str] | None = None) -> list[list[str]]:
    rows = []
    for p in profiles:
        name = display_names[p.author] if display_names else p.author
        rows.append([
            name, str(p.n_comments), str(p.n_submissions),
            _fmt(p.comment_additive_risk), _fmt(p.comment_compound_risk),
            _fmt(p.submission_additive_risk), _fmt(p.submission_compound_risk),
        ])
    rows.sort(key=lambda r: r[0])
    return rows


def population_json(summary: RiskPopulationSummary, rates) -> dict:
    def buckets(bs):
        return [{"label": b.label, "lo": b.lo, "hi": b.hi, "count": b.count} for b in bs]

    return {
        "sample_size": summary.sample_size,
        "mean_comments": summary.mean_comments,
        "mean_submissions": summary.mean_submissions,
        "comment_count_histogram": buckets(summary.comment_buckets),
        "submission_count_histogram": buckets(summary.submission_buckets),
        "risk_threshold": summary.threshold,
        "frac_comment_compound_risk_at_threshold": summary.frac_comment_risk_at_threshold,
        "frac_submission_compound_risk_at_threshold": summary.frac_submission_risk_at_threshold,
        "frac_comment_additive_risk_at_threshold": summary.frac_comment_additive_at_threshold,
        "frac_submission_additive_risk_at_threshold": summary.frac_submission_additive_at_threshold,
        "missing_rate_comments": rates.comments,
        "missing_rate_submissions": rates.submissions,
    }


# -- communities ------------------------------------------------------------------

COMMUNITIES_CSV_HEADER = [
    "subreddit", "observed_comments", "observed_submissions",
    "dangling_comments", "dangling_submissions",
    "pct_missing_comments", "pct_missing_submissions", "created_month",
]


def community_rows(rows: Sequence[CommunityGapStats]) -> list[list[str]]:
    return [
        [
            r.subreddit, str(r.observed_comments), str(r.observed_submissions),
            str(r.dangling_comments), str(r.dangling_submissions),
            _fmt(r.pct_missing_comments), _fmt(r.pct_missing_submissions), str(r.created_month),
        ]
        for r in rows
    ]


def regression_json(fit: RegressionFit | None, kind: str, transform: str, error: str | None = None) -> dict:
    if fit is None:
        return {"kind": kind, "transform": transform, "error": error or "fit unavailable"}
    return {
        "kind": kind,
        "transform": transform,
        "coefficients": {
            name: {
                "estimate": float(est),
                "std_error": float(se),
                "t_value": float(tv),
                "p_value": float(pv),
                "stars": stars,
            }
            for name, est, se, tv, pv, stars in zip(
                fit.names, fit.coefficients, fit.std_errors, fit.t_values, fit.p_values, fit.stars
            )
        },
        "dropped_predictors": list(fit.dropped_predictors),
        "r_squared": fit.r_squared,
        "adj_r_squared": fit.adj_r_squared,
        "n_observations": fit.n_observations,
    }


_ROW_ORDER = ("total_content", "created_month", "intercept")


def regression_text(fits: dict[str, RegressionFit | None], transform: str) -> str:
    """Two-column text table: one regression per record kind."""
    kinds = list(fits)
    width = 26
    lines = [f"{'':{width}}" + "".join(f"{k.capitalize():>18}" for k in kinds)]
    lines.append("-" * (width + 18 * len(kinds)))
    seen = [n for f in fits.values() if f is not None for n in f.names]
    names = [n for n in _ROW_ORDER if n in seen] + [n for n in seen if n not in _ROW_ORDER]
    if not names:
        lines.append("(no fit available)")
    for name in dict.fromkeys(names):
        est_cells, se_cells = [], []
        for fit in fits.values():
            if fit is None or name not in fit.names:
                est_cells.append(f"{'--':>18}")
                se_cells.append(f"{'':>18}")
            else:
                i = fit.names.index(name)
                est_cells.append(f"{fit.coefficients[i]:.3f}{fit.stars[i]:<3}".rjust(18))
                se_cells.append(f"({fit.std_errors[i]:.3f})".rjust(18))
        lines.append(f"{name:{width}}" + "".join(est_cells))
        lines.append(f"{'':{width}}" + "".join(se_cells))

    def stat_row(label, values):
        lines.append(f"{label:{width}}" + "".join(f"{v:>18}" for v in values))

    stat_row("Observations", [str(f.n_observations) if f else "--" for f in fits.values()])
    stat_row("R-squared", [f"{f.r_squared:.3f}" if f else "--" for f in fits.values()])
    stat_row("Adj. R-squared", [f"{f.adj_r_squared:.3f}" if f else "--" for f in fits.values()])
    lines.append("-" * (width + 18 * len(kinds)))
    lines.append(f"Note: predictors under transform={transform}; * p<0.1, ** p<0.05, *** p<0.01")
    for kind, fit in fits.items():
        if fit is not None and fit.dropped_predictors:
            lines.append(f"Note: {kind}: dropped constant predictor(s): {', '.join(fit.dropped_predictors)}")
        elif fit is None:
            lines.append(f"Note: {kind}: fit unavailable")
    return "\n".join(lines) + "\n"


def threshold_json(report: ThresholdReport) -> dict:
    return {
        "threshold_pct": report.threshold_pct,
        "communities_at_or_over_threshold_comments": report.communities_over_threshold_comments,
        "communities_at_or_over_threshold_submissions": report.communities_over_threshold_submissions,
        "communities_with_any_dangling": report.communities_with_any_dangling,
        "mean_missing_share_comments_among_dangling": report.mean_missing_share_comments,
        "mean_missing_share_submissions_among_dangling": report.mean_missing_share_submissions,
    }


# -- combined summary ---------------------------------------------------------------


def summary_json(
    dangling: DanglingReport | None,
    census_comments: CensusResult | None,
    census_submissions: CensusResult | None,
) -> dict:
    """Headline table: dangling references and unknown unknowns per kind."""
    return {
        "rows": [
            {
                "data_type": "Dangling References",
                "comments": dangling.dangling_comment_refs if dangling else None,
                "submissions": dangling.dangling_submission_refs if dangling else None,
            },
            {
                "data_type": "Unknown Unknowns",
                "comments": census_comments.total_missing if census_comments else None,
                "submissions": census_submissions.total_missing if census_submissions else None,
            },
        ]
    }
