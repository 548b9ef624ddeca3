import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapaudit.census import (
    EmptyObservedSet,
    ExclusionRange,
    build_observed,
    census,
    detect_discontinuities,
    load_exclusions,
    merge,
)
from gapaudit.idcodec import RecordId, RecordKind
from gapaudit.intervals import IdIntervalSet

from conftest import make_spec
from gapaudit.synth import CorpusPlan, EpochJump, UniformGaps


def test_build_observed_from_record_ids():
    ids = [RecordId(RecordKind.COMMENT, v) for v in [1, 2, 3, 5, 7]]
    build = build_observed(ids)
    assert build.intervals.to_list() == [(1, 3), (5, 5), (7, 7)]
    assert build.duplicates == 0


def test_build_observed_empty():
    build = build_observed([])
    assert build.intervals.is_empty


def test_build_observed_rejects_mixed_kinds():
    ids = [RecordId(RecordKind.COMMENT, 1), RecordId(RecordKind.SUBMISSION, 2)]
    with pytest.raises(ValueError):
        build_observed(ids)


def test_build_observed_tallies_duplicates():
    build = build_observed(np.array([1, 1, 2, 2, 2, 3]))
    assert build.duplicates == 3
    assert build.intervals.cardinality == 3


def test_census_auto_range():
    obs = IdIntervalSet.from_values([1, 2, 3, 5, 7])
    result = census(obs)
    assert result.runs == [(4, 4), (6, 6)]
    assert result.total_missing == 2
    assert result.observed_in_range == 5
    assert result.excluded_in_range == 0


def test_census_exclusion_subtraction():
    obs = IdIntervalSet.from_values([1, 2, 3, 5, 7])
    result = census(obs, exclusions=[ExclusionRange(4, 4, "test")])
    assert result.runs == [(6, 6)]
    assert result.total_missing == 1
    assert result.excluded_in_range == 1


def test_census_overlapping_exclusions_normalize():
    obs = IdIntervalSet.from_values([1, 10])
    result = census(obs, exclusions=[ExclusionRange(2, 5), ExclusionRange(4, 7)])
    assert result.runs == [(8, 9)]
    assert result.excluded_in_range == 6


def test_census_empty_observed_raises():
    with pytest.raises(EmptyObservedSet):
        census(IdIntervalSet.empty())


def test_census_full_sequence_has_no_missing():
    obs = IdIntervalSet.from_values(np.arange(1, 1001))
    assert census(obs).total_missing == 0


def test_census_forced_low_bound_reports_pre_range_separately():
    obs = IdIntervalSet.from_values([100, 101, 103])
    result = census(obs, lo=1)
    assert result.pre_range_unobserved == 99
    assert result.total_missing == 1  # only the in-hull gap at 102
    assert result.runs == [(102, 102)]


def test_census_forced_high_bound_reports_post_range_separately():
    obs = IdIntervalSet.from_values([10, 12])
    result = census(obs, hi=20)
    assert result.post_range_unobserved == 8
    assert result.total_missing == 1


def test_census_partition_invariant_within_hull():
    obs = IdIntervalSet.from_values([1, 2, 3, 5, 7, 11, 12])
    excl = [ExclusionRange(8, 9)]
    result = census(obs, exclusions=excl)
    span = result.hi - result.lo + 1
    assert span == result.observed_in_range + result.excluded_in_range + result.total_missing


def test_census_exclusion_overlapping_observed_not_double_counted():
    obs = IdIntervalSet.from_values([1, 2, 3, 5])
    result = census(obs, exclusions=[ExclusionRange(2, 4)])
    # positions 2,3 observed; 4 excluded-and-unobserved
    assert result.excluded_in_range == 1
    assert result.total_missing == 0
    span = result.hi - result.lo + 1
    assert span == result.observed_in_range + result.excluded_in_range + result.total_missing


def test_monotonicity_adding_observation_never_increases_missing():
    base = [1, 2, 5, 9]
    obs = IdIntervalSet.from_values(base)
    before = census(obs).total_missing
    obs2 = merge(obs, IdIntervalSet.from_values([4]))
    assert census(obs2).total_missing <= before


def test_detect_discontinuities():
    obs = IdIntervalSet.from_intervals([(1, 10), (10**9 + 1, 10**9 + 10)])
    found = detect_discontinuities(obs, threshold=10**6)
    assert len(found) == 1
    assert (found[0].lo, found[0].hi) == (11, 10**9)


def test_detect_discontinuities_none_on_uniform():
    obs = IdIntervalSet.from_values(np.arange(1, 5000, 2))
    assert detect_discontinuities(obs, threshold=10**6) == []


def test_detected_candidates_promote_to_exclusions():
    obs = IdIntervalSet.from_intervals([(1, 10), (10**9 + 1, 10**9 + 10)])
    candidates = detect_discontinuities(obs, threshold=10**6)
    result = census(obs, exclusions=candidates)
    assert result.total_missing == 0


def test_merge_identity_and_coalescing():
    x = IdIntervalSet.from_intervals([(1, 3)])
    assert merge(x, IdIntervalSet.empty()) == x
    assert merge(x, IdIntervalSet.from_intervals([(2, 5)])).to_list() == [(1, 5)]


def test_sharded_build_equals_unsharded():
    rng = np.random.default_rng(5)
    values = rng.choice(10_000, size=4_000, replace=False)
    whole = build_observed(values).intervals
    parts = [build_observed(chunk).intervals for chunk in np.array_split(values, 5)]
    combined = IdIntervalSet.empty()
    for p in parts:
        combined = merge(combined, p)
    assert combined == whole


def test_census_recovers_planted_uniform_gaps_exactly():
    spec = make_spec(seed=11, n_comments=50_000, comment_gaps=(UniformGaps(0.01),))
    plan = CorpusPlan(spec)
    build = build_observed(plan.comments.observed_ids)
    result = census(build.intervals)
    assert result.missing == plan.manifest().comments.missing


def test_census_with_epoch_exclusion_matches_manifest():
    spec = make_spec(
        seed=12,
        n_comments=60_000,
        comment_gaps=(UniformGaps(0.005), EpochJump(20_000, 30_000)),
    )
    plan = CorpusPlan(spec)
    obs = build_observed(plan.comments.observed_ids).intervals
    excl = [ExclusionRange(lo, hi, "epoch") for lo, hi in plan.manifest().comments.epoch.runs()]
    result = census(obs, exclusions=excl)
    assert result.missing == plan.manifest().comments.missing


def test_planted_epoch_recovered_by_detection():
    spec = make_spec(
        seed=13,
        n_comments=100_000,
        comment_gaps=(EpochJump(51_000, 60_999),),
    )
    plan = CorpusPlan(spec)
    obs = build_observed(plan.comments.observed_ids).intervals
    found = detect_discontinuities(obs, threshold=5_000)
    assert [(c.lo, c.hi) for c in found] == [(51_000, 60_999)]


def test_load_exclusions_toml_and_json(tmp_path):
    toml_path = tmp_path / "x.toml"
    toml_path.write_text(
        '[[exclusions]]\nlo = 4\nhi = 9\nlabel = "epoch"\n[[exclusions]]\nlo = 20\nhi = 30\n'
    )
    got = load_exclusions(toml_path)
    assert [(e.lo, e.hi, e.label) for e in got] == [(4, 9, "epoch"), (20, 30, "")]

    json_path = tmp_path / "x.json"
    json_path.write_text('[{"lo": 1, "hi": 2, "label": "a"}]')
    got = load_exclusions(json_path)
    assert [(e.lo, e.hi, e.label) for e in got] == [(1, 2, "a")]


@given(st.sets(st.integers(min_value=0, max_value=300), min_size=1, max_size=80))
@settings(max_examples=100, deadline=None)
def test_census_matches_brute_force(vals):
    obs = IdIntervalSet.from_values(list(vals))
    result = census(obs)
    lo, hi = min(vals), max(vals)
    expect = sorted(set(range(lo, hi + 1)) - vals)
    assert result.missing == IdIntervalSet.from_values(expect)
    assert result.total_missing == len(expect)
