import json

import numpy as np
import pytest

from gapaudit.census import build_observed, census, detect_discontinuities
from gapaudit.idcodec import RecordKind
from gapaudit.ingest import load_columns
from gapaudit.intervals import IdIntervalSet
from gapaudit.references import audit_references
from gapaudit.sweep import FaultyStore, MockStore, inject_faults, sweep
from gapaudit.synth import (
    BurstyGaps,
    CorpusPlan,
    EpochJump,
    InvalidSpec,
    KindSpec,
    SyntheticManifest,
    SynthSpec,
    UniformGaps,
    generate,
)

from conftest import make_spec


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        make_spec(comment_gaps=(UniformGaps(1.5),)).validate()
    with pytest.raises(InvalidSpec):
        make_spec(comment_gaps=(EpochJump(1, 2),)).validate()  # outside range
    with pytest.raises(InvalidSpec):
        SynthSpec(
            comments=KindSpec(10, 5), submissions=KindSpec(1, 2)
        ).validate()


def test_spec_roundtrip_through_dict():
    spec = make_spec(
        comment_gaps=(UniformGaps(0.01), EpochJump(5000, 6000)),
        submission_gaps=(BurstyGaps(0.05, mean_run=10.0),),
        plants=6,
    )
    again = SynthSpec.from_dict(spec.to_dict())
    assert again == spec


def test_spec_from_toml_and_json(tmp_path):
    spec = make_spec()
    json_path = tmp_path / "spec.json"
    json_path.write_text(json.dumps(spec.to_dict()))
    assert SynthSpec.from_file(json_path) == spec

    toml_path = tmp_path / "spec.toml"
    toml_path.write_text(
        "seed = 3\nn_subreddits = 4\nn_authors = 10\n"
        "[comments]\nlo = 1\nhi = 2000\ngap_models = [{kind = 'uniform', rate = 0.01}]\n"
        "[submissions]\nlo = 1\nhi = 500\n"
    )
    got = SynthSpec.from_file(toml_path)
    assert got.seed == 3
    assert got.comments.gap_models == (UniformGaps(0.01),)


def test_gapless_spec_yields_zero_missing_and_zero_danglings():
    spec = make_spec(seed=50, comment_gaps=(), submission_gaps=(), plants=0)
    plan = CorpusPlan(spec)
    manifest = plan.manifest()
    assert manifest.comments.missing.cardinality == 0
    assert manifest.submissions.missing.cardinality == 0
    assert census(build_observed(plan.comments.observed_ids).intervals).total_missing == 0

    obs_c = IdIntervalSet.from_values(plan.comments.observed_ids)
    obs_s = IdIntervalSet.from_values(plan.submissions.observed_ids)
    from gapaudit.references import ReferenceAuditor

    auditor = ReferenceAuditor(obs_c, obs_s)
    for block in plan.comment_blocks():
        auditor.add_arrays(block.ids, block.parent_values, block.parent_is_comment,
                           block.link_values, block.subreddit_codes, plan.subreddit_names)
    report = auditor.report()
    assert report.dangling_comment_refs == 0
    assert report.dangling_submission_refs == 0


def test_uniform_rate_within_binomial_band_and_census_exact():
    n = 1_000_000
    rate = 0.01
    spec = make_spec(seed=51, n_comments=n, comment_gaps=(UniformGaps(rate),))
    plan = CorpusPlan(spec)
    manifest = plan.manifest()
    missing = manifest.comments.missing.cardinality
    mean, sd = n * rate, (n * rate * (1 - rate)) ** 0.5
    assert abs(missing - mean) <= 2.8 * sd  # 99% band with slack
    result = census(build_observed(plan.comments.observed_ids).intervals)
    assert result.missing == manifest.comments.missing


def test_epoch_jump_recovered_exactly():
    spec = make_spec(
        seed=52, n_comments=1_000_000,
        comment_gaps=(EpochJump(500_000, 600_000),),
    )
    plan = CorpusPlan(spec)
    obs = build_observed(plan.comments.observed_ids).intervals
    found = detect_discontinuities(obs, threshold=10_000)
    assert [(c.lo, c.hi) for c in found] == [(500_000, 600_000)]


def test_bursty_model_hits_target_rate_roughly():
    n = 500_000
    spec = make_spec(seed=53, n_comments=n, comment_gaps=(BurstyGaps(0.05, mean_run=25.0),))
    plan = CorpusPlan(spec)
    frac = plan.manifest().comments.missing.cardinality / n
    assert frac == pytest.approx(0.05, rel=0.15)
    # runs should be long on average, unlike uniform gaps
    runs = plan.manifest().comments.missing.to_list()
    mean_len = np.mean([hi - lo + 1 for lo, hi in runs])
    assert mean_len > 5.0


def test_generation_deterministic_byte_identical(tmp_path):
    spec = make_spec(seed=54, n_comments=4000, n_submissions=1500, plants=8, deleted_rate=0.05)
    a = generate(spec, tmp_path / "a")
    b = generate(spec, tmp_path / "b")
    assert (tmp_path / "a/comments.ndjson").read_bytes() == (tmp_path / "b/comments.ndjson").read_bytes()
    assert (tmp_path / "a/submissions.ndjson").read_bytes() == (tmp_path / "b/submissions.ndjson").read_bytes()
    assert (tmp_path / "a/manifest.json").read_bytes() == (tmp_path / "b/manifest.json").read_bytes()


def test_generated_corpus_roundtrips_through_ingest(tmp_path):
    spec = make_spec(seed=55, n_comments=6000, n_submissions=2000, plants=10, deleted_rate=0.03)
    corpus = generate(spec, tmp_path)
    comments = load_columns([corpus.comments_path], RecordKind.COMMENT, mode="strict")
    submissions = load_columns([corpus.submissions_path], RecordKind.SUBMISSION, mode="strict")
    manifest = corpus.manifest
    assert comments.stats.records_malformed == 0
    assert len(comments) == manifest.comments.observed_total
    assert len(submissions) == manifest.submissions.observed_total

    result_c = census(build_observed(comments.ids).intervals)
    assert result_c.missing == manifest.comments.missing
    result_s = census(build_observed(submissions.ids).intervals)
    assert result_s.missing == manifest.submissions.missing

    report = audit_references(comments, build_observed(comments.ids).intervals,
                              build_observed(submissions.ids).intervals)
    assert report.submission_target_ids.tolist() == manifest.dangling_submission_targets.tolist()
    assert report.comment_target_ids.tolist() == manifest.dangling_comment_targets.tolist()
    assert report.referencing_edges == manifest.dangling_edges


def test_deleted_records_still_observed(tmp_path):
    spec = make_spec(seed=56, n_comments=3000, deleted_rate=0.2)
    corpus = generate(spec, tmp_path)
    comments = load_columns([corpus.comments_path], RecordKind.COMMENT, mode="strict")
    assert comments.stats.deleted_count > 0
    assert census(build_observed(comments.ids).intervals).missing == corpus.manifest.comments.missing


def test_manifest_user_truth_consistent():
    spec = make_spec(seed=57, n_comments=50_000, comment_gaps=(UniformGaps(0.01),))
    plan = CorpusPlan(spec)
    manifest = plan.manifest()
    total_true = sum(u.comments for u in manifest.users.values())
    universe = spec.comments.hi - spec.comments.lo + 1
    epoch = manifest.comments.epoch.cardinality
    assert total_true == universe - epoch  # every issued id has an author
    lost = [name for name, u in manifest.users.items() if u.lost_comments]
    assert lost  # 1% of 50k ids loses something for most active users
    assert manifest.comments.missing.cardinality + manifest.comments.observed_total == total_true


def test_manifest_community_truth_consistent():
    spec = make_spec(seed=58, n_comments=30_000)
    plan = CorpusPlan(spec)
    manifest = plan.manifest()
    assert sum(c.observed_comments for c in manifest.communities.values()) == manifest.comments.observed_total
    assert sum(c.true_comments for c in manifest.communities.values()) == (
        spec.comments.hi - spec.comments.lo + 1
    )


def test_manifest_json_roundtrip(tmp_path):
    spec = make_spec(seed=59, plants=4)
    plan = CorpusPlan(spec)
    manifest = plan.manifest()
    data = json.loads(json.dumps(manifest.to_json_dict()))
    again = SyntheticManifest.from_json_dict(data)
    assert again.comments.missing == manifest.comments.missing
    assert again.dangling_submission_targets.tolist() == manifest.dangling_submission_targets.tolist()
    assert again.users == manifest.users
    assert again.communities == manifest.communities


def test_block_size_does_not_change_output():
    spec = make_spec(seed=60, n_comments=5000, plants=6)
    plan_a = CorpusPlan(spec)
    plan_b = CorpusPlan(spec)
    big = list(plan_a.comment_blocks(block_size=10_000))
    small = list(plan_b.comment_blocks(block_size=333))
    cat = lambda blocks, f: np.concatenate([getattr(b, f) for b in blocks])
    for field in ("ids", "parent_values", "link_values", "subreddit_codes", "author_codes"):
        np.testing.assert_array_equal(cat(big, field), cat(small, field))


# -- sweep -------------------------------------------------------------------


def test_sweep_batches_of_100_default():
    spec = make_spec(seed=61, n_submissions=250, n_comments=300,
                     comment_gaps=(), submission_gaps=())
    plan = CorpusPlan(spec)
    store = MockStore.from_plan(plan, RecordKind.SUBMISSION)
    result = sweep(store, lo=spec.submissions.lo, hi=spec.submissions.hi)
    assert result.log.batch_size == 100
    assert len(result.log.batches) == 3
    assert result.found_ids.size == 250
    assert len(result.records) == 250


def test_sweep_private_ids_silently_absent():
    spec = make_spec(seed=62, n_comments=2000, comment_gaps=(UniformGaps(0.005),))
    plan = CorpusPlan(spec)
    store = MockStore.from_plan(plan, RecordKind.COMMENT)
    result = sweep(store, lo=spec.comments.lo, hi=spec.comments.hi)
    missing = plan.manifest().comments.missing
    assert result.found_ids.size == plan.comments.observed_ids.size
    swept_obs = build_observed(result.found_ids).intervals
    assert census(swept_obs).missing == missing


def test_sweep_workers_identical_record_sets():
    spec = make_spec(seed=63, n_comments=5000, comment_gaps=(UniformGaps(0.01),))
    plan = CorpusPlan(spec)
    store = MockStore.from_plan(plan, RecordKind.COMMENT)
    one = sweep(store, lo=spec.comments.lo, hi=spec.comments.hi, workers=1)
    eight = sweep(store, lo=spec.comments.lo, hi=spec.comments.hi, workers=8)
    assert sorted(one.found_ids.tolist()) == sorted(eight.found_ids.tolist())
    key = lambda r: r["id"]
    assert sorted(one.records, key=key) == sorted(eight.records, key=key)


def test_sweep_deleted_truncated_returned():
    spec = make_spec(seed=64, n_comments=1000, deleted_rate=0.3, comment_gaps=())
    plan = CorpusPlan(spec)
    store = MockStore.from_plan(plan, RecordKind.COMMENT)
    result = sweep(store, lo=spec.comments.lo, hi=spec.comments.hi)
    assert result.found_ids.size == 1000
    deleted = [r for r in result.records if r["author"] == "[deleted]"]
    assert deleted and all(r["body"] == "[deleted]" for r in deleted)


def test_inject_faults_identity_at_zero():
    spec = make_spec(seed=65, n_comments=500, comment_gaps=())
    store = MockStore.from_plan(CorpusPlan(spec), RecordKind.COMMENT)
    assert inject_faults(store, 0.0, seed=1) is store


def test_inject_faults_deterministic():
    spec = make_spec(seed=66, n_comments=2000, comment_gaps=())
    plan = CorpusPlan(spec)

    def run():
        store = inject_faults(MockStore.from_plan(plan, RecordKind.COMMENT), 0.5, seed=9)
        return sweep(store, lo=spec.comments.lo, hi=spec.comments.hi).found_ids.tolist()

    assert run() == run()


def test_inject_faults_two_pass_residual():
    spec = make_spec(seed=67, n_comments=20_000, comment_gaps=())
    plan = CorpusPlan(spec)
    store = inject_faults(MockStore.from_plan(plan, RecordKind.COMMENT), 0.5, seed=5)
    first = sweep(store, lo=spec.comments.lo, hi=spec.comments.hi)
    requested = np.arange(spec.comments.lo, spec.comments.hi + 1, dtype=np.int64)
    missed = requested[~np.isin(requested, first.found_ids)]
    second = sweep(store, ids=missed)
    residual = missed.size - second.found_ids.size
    assert residual / requested.size == pytest.approx(0.25, abs=0.02)


def test_fault_rate_validated():
    spec = make_spec(seed=68, n_comments=100, comment_gaps=())
    store = MockStore.from_plan(CorpusPlan(spec), RecordKind.COMMENT)
    with pytest.raises(ValueError):
        FaultyStore(store, 1.0, seed=0)


def test_plants_require_missing_pool():
    with pytest.raises(InvalidSpec):
        CorpusPlan(make_spec(seed=69, comment_gaps=(), submission_gaps=(), plants=4))
