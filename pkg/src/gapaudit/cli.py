"""Command-line entry point wiring ingestion through analyses into report bundles.

Every command writes its reports plus a manifest.json carrying the config
echo, input checksums and tool version. Bundles are byte-identical for
identical inputs and configuration, independent of worker count: all
parallelism flows through associative merges applied in input order, and
no report embeds wall-clock state.
"""
from __future__ import annotations

import argparse
import hashlib
import hmac
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .census import (
    EmptyObservedSet,
    build_observed,
    census,
    detect_discontinuities,
    load_exclusions,
)
from .communities import (
    RankDeficient,
    TooFewObservations,
    aggregate_communities,
    fit_missingness_model,
    threshold_report,
)
from .idcodec import CodecError, RecordKind
from .ingest import IngestError, load_columns
from .references import audit_references
from .risk import (
    EmptyPopulation,
    MissingRates,
    SampleTooLarge,
    build_profiles,
    population_summary,
    sample_users,
)
from .sweep import MockStore, inject_faults, sweep
from .synth import CorpusPlan, InvalidSpec, SynthSpec, generate
from .temporal import BURST_OPERANDS, NoNeighbors, attribute_timestamps, monthly_stats
from . import reports

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

KINDS = {"comment": RecordKind.COMMENT, "submission": RecordKind.SUBMISSION}

DATA_ERRORS = (
    IngestError,
    CodecError,
    EmptyObservedSet,
    SampleTooLarge,
    EmptyPopulation,
    InvalidSpec,
    NoNeighbors,
    OSError,
    json.JSONDecodeError,
)

ANON_KEY_ENV = "GAPAUDIT_ANON_KEY"


class UsageError(Exception):
    pass


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class ReportBundle:
    """Collects report payloads in memory; writes everything at the end so a
    failure never leaves a partial bundle behind."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self._json: list[tuple[str, object]] = []
        self._csv: list[tuple[str, list, list]] = []
        self._text: list[tuple[str, str]] = []
        self._ndjson: list[tuple[str, list[dict]]] = []

    def add_json(self, name: str, obj) -> None:
        self._json.append((name, obj))

    def add_csv(self, name: str, header, rows) -> None:
        self._csv.append((name, list(header), list(rows)))

    def add_text(self, name: str, text: str) -> None:
        self._text.append((name, text))

    def add_ndjson(self, name: str, rows: list[dict]) -> None:
        self._ndjson.append((name, rows))

    def write(self, manifest: dict) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        try:
            for name, obj in self._json:
                path = self.out_dir / name
                reports.dump_json(path, obj)
                written.append(path)
            for name, header, rows in self._csv:
                path = self.out_dir / name
                reports.dump_csv(path, header, rows)
                written.append(path)
            for name, text in self._text:
                path = self.out_dir / name
                path.write_text(text, encoding="utf-8", newline="")
                written.append(path)
            for name, rows in self._ndjson:
                path = self.out_dir / name
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    for row in rows:
                        fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")
                written.append(path)
            reports.dump_json(self.out_dir / "manifest.json", manifest)
        except BaseException:
            for path in written:
                try:
                    path.unlink()
                except OSError:
                    pass
            raise


def _run_manifest(command: str, config: dict, input_paths: list[str]) -> dict:
    checksums = {str(p): _sha256(p) for p in input_paths}
    return {
        "tool": "gapaudit",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": checksums,
    }


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if p.suffix.lower() == ".json":
        data = json.loads(p.read_text(encoding="utf-8"))
    else:
        with open(p, "rb") as fh:
            data = tomllib.load(fh)
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a table of options")
    return data


def _opt(args, file_cfg: dict, name: str, default):
    """Flag value, else config-file value, else built-in default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in file_cfg:
        return file_cfg[name]
    return default


def _sources(paths: list[str] | None, use_stdin: bool):
    sources: list = list(paths or [])
    for p in sources:
        if not Path(p).exists():
            raise UsageError(f"input file not found: {p}")
    if use_stdin:
        sources.append(sys.stdin)
    if not sources:
        raise UsageError("no input: pass --input/--comments/--submissions or --stdin")
    file_paths = [p for p in sources if not hasattr(p, "read")]
    return sources, file_paths


def _exclusions(path: str | None):
    return load_exclusions(path) if path else []


def _load_kind(paths, kind: RecordKind, mode: str, workers: int):
    return load_columns(paths, kind, mode=mode, workers=workers)


def _anon_names(authors, enabled: bool) -> dict[str, str] | None:
    if not enabled:
        return None
    key = os.environ.get(ANON_KEY_ENV)
    if not key:
        raise UsageError(f"--anonymize requires the {ANON_KEY_ENV} environment variable")
    return {a: hmac.new(key.encode(), a.encode(), hashlib.sha256).hexdigest() for a in authors}


# -- commands -----------------------------------------------------------------


def _cmd_census(args, file_cfg) -> int:
    kind_name = _opt(args, file_cfg, "kind", None)
    if kind_name not in KINDS:
        raise UsageError("census needs --kind comment|submission")
    mode = _opt(args, file_cfg, "mode", "lenient")
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    sources, file_paths = _sources(_opt(args, file_cfg, "input", None), args.stdin)
    cols = _load_kind(sources, KINDS[kind_name], mode, workers)
    build = build_observed(cols.ids)
    excl_path = _opt(args, file_cfg, "exclusions", None)
    lo = _opt(args, file_cfg, "lo", None)
    hi = _opt(args, file_cfg, "hi", None)
    result = census(build.intervals, lo=lo, hi=hi, exclusions=_exclusions(excl_path))
    threshold = _opt(args, file_cfg, "detect_threshold", None)
    candidates = detect_discontinuities(build.intervals, int(threshold)) if threshold else None

    bundle = ReportBundle(Path(args.out))
    bundle.add_json(f"census_{kind_name}.json",
                    reports.census_json(result, kind_name, candidates, build.duplicates))
    bundle.add_csv(f"census_{kind_name}_runs.csv", ["lo", "hi", "len"], reports.census_runs_rows(result))
    config = {"kind": kind_name, "exclusions": excl_path, "lo": lo, "hi": hi,
              "detect_threshold": threshold, "mode": mode}
    bundle.write(_run_manifest("census", config, file_paths))
    return 0


def _cmd_dangling(args, file_cfg) -> int:
    mode = _opt(args, file_cfg, "mode", "lenient")
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    c_sources, c_paths = _sources(_opt(args, file_cfg, "comments", None), False)
    s_sources, s_paths = _sources(_opt(args, file_cfg, "submissions", None), False)
    comments = _load_kind(c_sources, RecordKind.COMMENT, mode, workers)
    submissions = _load_kind(s_sources, RecordKind.SUBMISSION, mode, workers)
    obs_c = build_observed(comments.ids).intervals
    obs_s = build_observed(submissions.ids).intervals
    report = audit_references(comments, obs_c, obs_s)

    bundle = ReportBundle(Path(args.out))
    bundle.add_json("dangling.json", reports.dangling_json(report))
    bundle.add_csv("dangling_by_subreddit.csv", reports.DANGLING_CSV_HEADER,
                   reports.dangling_subreddit_rows(report))
    bundle.write(_run_manifest("dangling", {"mode": mode}, c_paths + s_paths))
    return 0


def _cmd_temporal(args, file_cfg) -> int:
    kind_name = _opt(args, file_cfg, "kind", None)
    if kind_name not in KINDS:
        raise UsageError("temporal needs --kind comment|submission")
    mode = _opt(args, file_cfg, "mode", "lenient")
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    rolling = int(_opt(args, file_cfg, "rolling_window", 3))
    operand = _opt(args, file_cfg, "burst_operand", "run-start")
    if operand not in BURST_OPERANDS:
        raise UsageError(f"--burst-operand must be one of {BURST_OPERANDS}")
    sources, file_paths = _sources(_opt(args, file_cfg, "input", None), args.stdin)
    cols = _load_kind(sources, KINDS[kind_name], mode, workers)
    build = build_observed(cols.ids)
    excl_path = _opt(args, file_cfg, "exclusions", None)
    result = census(build.intervals, exclusions=_exclusions(excl_path))
    attribution = attribute_timestamps(result, cols.ids, cols.created_utc)
    stats = monthly_stats(attribution, cols.created_utc, rolling_window=rolling, burst_operand=operand)

    bundle = ReportBundle(Path(args.out))
    bundle.add_csv(f"temporal_{kind_name}.csv", reports.TEMPORAL_CSV_HEADER, reports.temporal_rows(stats))
    config = {"kind": kind_name, "exclusions": excl_path, "rolling_window": rolling,
              "burst_operand": operand, "mode": mode,
              "clamped_timestamps": attribution.clamped_timestamps}
    bundle.write(_run_manifest("temporal", config, file_paths))
    return 0


def _risk_inputs(args, file_cfg):
    mode = _opt(args, file_cfg, "mode", "lenient")
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    c_sources, c_paths = _sources(_opt(args, file_cfg, "comments", None), False)
    s_sources, s_paths = _sources(_opt(args, file_cfg, "submissions", None), False)
    comments = _load_kind(c_sources, RecordKind.COMMENT, mode, workers)
    submissions = _load_kind(s_sources, RecordKind.SUBMISSION, mode, workers)
    return comments, submissions, c_paths + s_paths, mode


def _users_analysis(comments, submissions, args, file_cfg):
    excl_c = _exclusions(_opt(args, file_cfg, "comment_exclusions", None))
    excl_s = _exclusions(_opt(args, file_cfg, "submission_exclusions", None))
    census_c = census(build_observed(comments.ids).intervals, exclusions=excl_c)
    census_s = census(build_observed(submissions.ids).intervals, exclusions=excl_s)
    rates = MissingRates.from_counts(
        census_c.total_missing, census_c.observed_in_range,
        census_s.total_missing, census_s.observed_in_range,
    )

    authors = set(comments.author_names) | set(submissions.author_names)
    seed = int(_opt(args, file_cfg, "seed", 0))
    requested = _opt(args, file_cfg, "sample_size", None)
    from .ingest import AUTHOR_SENTINEL

    n_distinct = len(authors - {AUTHOR_SENTINEL})
    k = min(7400, n_distinct) if requested is None else int(requested)
    sample = sample_users(authors, k, seed)

    def counts(cols):
        tallies = np.bincount(cols.author_codes, minlength=len(cols.author_names))
        return {name: int(tallies[i]) for i, name in enumerate(cols.author_names)}

    profiles = build_profiles(sample, counts(comments), counts(submissions), rates)
    threshold = float(_opt(args, file_cfg, "risk_threshold", 0.5))
    summary = population_summary(profiles, threshold)
    return rates, sample, profiles, summary, {"sample_size": k, "seed": seed, "risk_threshold": threshold}


def _cmd_users(args, file_cfg) -> int:
    comments, submissions, paths, mode = _risk_inputs(args, file_cfg)
    rates, sample, profiles, summary, cfg = _users_analysis(comments, submissions, args, file_cfg)
    display = _anon_names(sample, bool(_opt(args, file_cfg, "anonymize", False)))

    bundle = ReportBundle(Path(args.out))
    bundle.add_csv("users.csv", reports.USERS_CSV_HEADER, reports.user_rows(profiles, display))
    bundle.add_json("users_summary.json", reports.population_json(summary, rates))
    cfg.update({"mode": mode, "anonymize": display is not None})
    bundle.write(_run_manifest("users", cfg, paths))
    return 0


def _communities_analysis(comments, submissions, args, file_cfg):
    obs_c = build_observed(comments.ids).intervals
    obs_s = build_observed(submissions.ids).intervals
    report = audit_references(comments, obs_c, obs_s)
    rows = aggregate_communities(comments, submissions, report)
    transform = _opt(args, file_cfg, "transform", "log10p1")
    fits, errors = {}, {}
    for kind in ("submission", "comment"):
        try:
            fits[kind] = fit_missingness_model(rows, kind, transform)
            errors[kind] = None
        except (RankDeficient, TooFewObservations) as exc:
            fits[kind] = None
            errors[kind] = str(exc)
    pct = float(_opt(args, file_cfg, "threshold_pct", 0.2))
    thresholds = threshold_report(rows, pct)
    return report, rows, fits, errors, transform, thresholds, pct


def _cmd_communities(args, file_cfg) -> int:
    comments, submissions, paths, mode = _risk_inputs(args, file_cfg)
    report, rows, fits, errors, transform, thresholds, pct = _communities_analysis(
        comments, submissions, args, file_cfg
    )
    bundle = ReportBundle(Path(args.out))
    bundle.add_csv("communities.csv", reports.COMMUNITIES_CSV_HEADER, reports.community_rows(rows))
    bundle.add_json("regression.json", {
        kind: reports.regression_json(fits[kind], kind, transform, errors[kind]) for kind in fits
    })
    bundle.add_text("regression.txt", reports.regression_text(fits, transform))
    bundle.add_json("communities_threshold.json", reports.threshold_json(thresholds))
    bundle.write(_run_manifest("communities", {"transform": transform, "threshold_pct": pct, "mode": mode}, paths))
    return 0


def _cmd_synth(args, file_cfg) -> int:
    spec_path = _opt(args, file_cfg, "spec", None)
    if not spec_path:
        raise UsageError("synth needs --spec")
    spec = SynthSpec.from_file(spec_path)
    out_dir = Path(args.out)
    corpus = generate(spec, out_dir)
    merged = {
        "tool": "gapaudit",
        "version": __version__,
        "command": "synth",
        "config": {"spec": spec.to_dict()},
        **corpus.manifest.to_json_dict(),
    }
    reports.dump_json(corpus.manifest_path, merged)
    return 0


def _cmd_sweep(args, file_cfg) -> int:
    spec_path = _opt(args, file_cfg, "spec", None)
    kind_name = _opt(args, file_cfg, "kind", None)
    if not spec_path or kind_name not in KINDS:
        raise UsageError("sweep needs --spec and --kind comment|submission")
    batch = int(_opt(args, file_cfg, "batch", 100))
    drop_rate = float(_opt(args, file_cfg, "drop_rate", 0.0))
    fault_seed = int(_opt(args, file_cfg, "fault_seed", 0))
    passes = int(_opt(args, file_cfg, "passes", 1))
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    if passes < 1:
        raise UsageError("--passes must be >= 1")
    spec = SynthSpec.from_file(spec_path)
    plan = CorpusPlan(spec)
    kind = KINDS[kind_name]
    store = inject_faults(MockStore.from_plan(plan, kind), drop_rate, fault_seed)
    kspec = spec.comments if kind is RecordKind.COMMENT else spec.submissions

    requested = np.arange(kspec.lo, kspec.hi + 1, dtype=np.int64)
    all_found: list[np.ndarray] = []
    all_records: list[dict] = []
    logs = []
    remaining = requested
    for _ in range(passes):
        if remaining.size == 0:
            break
        result = sweep(store, ids=remaining, batch=batch, workers=workers)
        all_found.append(result.found_ids)
        all_records.extend(result.records)
        logs.append({
            "batch_size": result.log.batch_size,
            "requested": result.log.requested,
            "returned": result.log.returned,
            "batches": [{"lo": b.lo, "hi": b.hi, "requested": b.requested, "found": b.found}
                        for b in result.log.batches],
        })
        found = np.concatenate(all_found)
        remaining = remaining[~np.isin(remaining, found)]

    found = np.concatenate(all_found) if all_found else np.empty(0, dtype=np.int64)
    order = np.argsort(np.array([int(r["id"], 36) for r in all_records], dtype=np.int64), kind="stable")
    records_sorted = [all_records[int(i)] for i in order]

    bundle = ReportBundle(Path(args.out))
    bundle.add_ndjson(f"sweep_{kind_name}.ndjson", records_sorted)
    bundle.add_json("sweep_log.json", {
        "kind": kind_name,
        "requested_total": int(requested.size),
        "found_total": int(found.size),
        "residual_missing": int(requested.size - found.size),
        "passes": logs,
    })
    config = {"spec": spec.to_dict(), "kind": kind_name, "batch": batch,
              "drop_rate": drop_rate, "fault_seed": fault_seed, "passes": passes}
    bundle.write(_run_manifest("sweep", config, [spec_path]))
    return 0


def _cmd_full(args, file_cfg) -> int:
    mode = _opt(args, file_cfg, "mode", "lenient")
    workers = _opt(args, file_cfg, "workers", os.cpu_count() or 1)
    c_sources, c_paths = _sources(_opt(args, file_cfg, "comments", None), False)
    s_sources, s_paths = _sources(_opt(args, file_cfg, "submissions", None), False)
    comments = _load_kind(c_sources, RecordKind.COMMENT, mode, workers)
    submissions = _load_kind(s_sources, RecordKind.SUBMISSION, mode, workers)

    excl_c = _exclusions(_opt(args, file_cfg, "comment_exclusions", None))
    excl_s = _exclusions(_opt(args, file_cfg, "submission_exclusions", None))
    build_c = build_observed(comments.ids)
    build_s = build_observed(submissions.ids)
    census_c = census(build_c.intervals, exclusions=excl_c)
    census_s = census(build_s.intervals, exclusions=excl_s)
    dangling = audit_references(comments, build_c.intervals, build_s.intervals)

    rolling = int(_opt(args, file_cfg, "rolling_window", 3))
    operand = _opt(args, file_cfg, "burst_operand", "run-start")
    temporal = {}
    for kind_name, cols, cres in (("comment", comments, census_c), ("submission", submissions, census_s)):
        attribution = attribute_timestamps(cres, cols.ids, cols.created_utc)
        temporal[kind_name] = monthly_stats(
            attribution, cols.created_utc, rolling_window=rolling, burst_operand=operand
        )

    rates, sample, profiles, summary, risk_cfg = _users_analysis(comments, submissions, args, file_cfg)
    display = _anon_names(sample, bool(_opt(args, file_cfg, "anonymize", False)))
    _, rows, fits, errors, transform, thresholds, pct = _communities_analysis(
        comments, submissions, args, file_cfg
    )

    bundle = ReportBundle(Path(args.out))
    bundle.add_json("census_comment.json", reports.census_json(census_c, "comment", None, build_c.duplicates))
    bundle.add_csv("census_comment_runs.csv", ["lo", "hi", "len"], reports.census_runs_rows(census_c))
    bundle.add_json("census_submission.json", reports.census_json(census_s, "submission", None, build_s.duplicates))
    bundle.add_csv("census_submission_runs.csv", ["lo", "hi", "len"], reports.census_runs_rows(census_s))
    bundle.add_json("dangling.json", reports.dangling_json(dangling))
    bundle.add_csv("dangling_by_subreddit.csv", reports.DANGLING_CSV_HEADER,
                   reports.dangling_subreddit_rows(dangling))
    for kind_name, stats in temporal.items():
        bundle.add_csv(f"temporal_{kind_name}.csv", reports.TEMPORAL_CSV_HEADER, reports.temporal_rows(stats))
    bundle.add_csv("users.csv", reports.USERS_CSV_HEADER, reports.user_rows(profiles, display))
    bundle.add_json("users_summary.json", reports.population_json(summary, rates))
    bundle.add_csv("communities.csv", reports.COMMUNITIES_CSV_HEADER, reports.community_rows(rows))
    bundle.add_json("regression.json", {
        kind: reports.regression_json(fits[kind], kind, transform, errors[kind]) for kind in fits
    })
    bundle.add_text("regression.txt", reports.regression_text(fits, transform))
    bundle.add_json("communities_threshold.json", reports.threshold_json(thresholds))
    bundle.add_json("summary.json", reports.summary_json(dangling, census_c, census_s))

    config = {
        "mode": mode,
        "comment_exclusions": _opt(args, file_cfg, "comment_exclusions", None),
        "submission_exclusions": _opt(args, file_cfg, "submission_exclusions", None),
        "rolling_window": rolling,
        "burst_operand": operand,
        "transform": transform,
        "threshold_pct": pct,
        **risk_cfg,
        "anonymize": display is not None,
    }
    bundle.write(_run_manifest("full", config, c_paths + s_paths))
    return 0


# -- parser ----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapaudit",
        description="Audit sequential-ID trace corpora for missing records.",
    )
    parser.add_argument("--version", action="version", version=f"gapaudit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default="audit-out"):
        p.add_argument("--config", help="TOML/JSON config file; flags override its values")
        p.add_argument("--out", default=out_default, help="output directory for the report bundle")
        p.add_argument("--workers", type=int, help="worker threads (default: machine parallelism)")
        p.add_argument("--mode", choices=["strict", "lenient"], help="malformed-line handling")

    p = sub.add_parser("census", help="count missing IDs inside the live range")
    common(p)
    p.add_argument("--kind", choices=list(KINDS))
    p.add_argument("--input", nargs="+", help="NDJSON shard files")
    p.add_argument("--stdin", action="store_true", help="also read one shard from standard input")
    p.add_argument("--exclusions", help="TOML/JSON exclusion ranges")
    p.add_argument("--lo", type=int, help="force census lower bound")
    p.add_argument("--hi", type=int, help="force census upper bound")
    p.add_argument("--detect-threshold", dest="detect_threshold", type=int,
                   help="report missing runs at least this long as exclusion candidates")

    p = sub.add_parser("dangling", help="audit references to absent comments/submissions")
    common(p)
    p.add_argument("--comments", nargs="+", help="comment NDJSON shards")
    p.add_argument("--submissions", nargs="+", help="submission NDJSON shards")

    p = sub.add_parser("temporal", help="attribute missing IDs to months")
    common(p)
    p.add_argument("--kind", choices=list(KINDS))
    p.add_argument("--input", nargs="+")
    p.add_argument("--stdin", action="store_true")
    p.add_argument("--exclusions")
    p.add_argument("--rolling-window", dest="rolling_window", type=int)
    p.add_argument("--burst-operand", dest="burst_operand", choices=list(BURST_OPERANDS))

    p = sub.add_parser("users", help="per-user missing-data risk")
    common(p)
    p.add_argument("--comments", nargs="+")
    p.add_argument("--submissions", nargs="+")
    p.add_argument("--comment-exclusions", dest="comment_exclusions")
    p.add_argument("--submission-exclusions", dest="submission_exclusions")
    p.add_argument("--sample-size", dest="sample_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--risk-threshold", dest="risk_threshold", type=float)
    p.add_argument("--anonymize", action="store_const", const=True,
                   help=f"replace authors with a keyed hash (key from ${ANON_KEY_ENV})")

    p = sub.add_parser("communities", help="per-community gap statistics and regression")
    common(p)
    p.add_argument("--comments", nargs="+")
    p.add_argument("--submissions", nargs="+")
    p.add_argument("--transform", choices=["log10p1", "raw"])
    p.add_argument("--threshold-pct", dest="threshold_pct", type=float)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    common(p, out_default="synth-out")
    p.add_argument("--spec", help="TOML/JSON generator spec")

    p = sub.add_parser("sweep", help="simulate the batched ID sweep against a mock store")
    common(p, out_default="sweep-out")
    p.add_argument("--spec")
    p.add_argument("--kind", choices=list(KINDS))
    p.add_argument("--batch", type=int)
    p.add_argument("--drop-rate", dest="drop_rate", type=float)
    p.add_argument("--fault-seed", dest="fault_seed", type=int)
    p.add_argument("--passes", type=int)

    p = sub.add_parser("full", help="run every analysis and a combined summary")
    common(p)
    p.add_argument("--comments", nargs="+")
    p.add_argument("--submissions", nargs="+")
    p.add_argument("--comment-exclusions", dest="comment_exclusions")
    p.add_argument("--submission-exclusions", dest="submission_exclusions")
    p.add_argument("--rolling-window", dest="rolling_window", type=int)
    p.add_argument("--burst-operand", dest="burst_operand", choices=list(BURST_OPERANDS))
    p.add_argument("--sample-size", dest="sample_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--risk-threshold", dest="risk_threshold", type=float)
    p.add_argument("--anonymize", action="store_const", const=True)
    p.add_argument("--transform", choices=["log10p1", "raw"])
    p.add_argument("--threshold-pct", dest="threshold_pct", type=float)

    return parser


_COMMANDS = {
    "census": _cmd_census,
    "dangling": _cmd_dangling,
    "temporal": _cmd_temporal,
    "users": _cmd_users,
    "communities": _cmd_communities,
    "synth": _cmd_synth,
    "sweep": _cmd_sweep,
    "full": _cmd_full,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _load_config_file(getattr(args, "config", None))
        return _COMMANDS[args.command](args, file_cfg)
    except UsageError as exc:
        print(f"gapaudit: {exc}", file=sys.stderr)
        return 2
    except DATA_ERRORS as exc:
        print(f"gapaudit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
