import math

import numpy as np
import pytest

from gapaudit.census import build_observed, census
from gapaudit.temporal import (
    AttributedRun,
    NoNeighbors,
    attribute_timestamps,
    burstiness,
    burstiness_score,
    month_index_of,
    month_label,
    monthly_stats,
)
from gapaudit.synth import CorpusPlan, UniformGaps

from conftest import make_spec

# Arithmetic oracle for the [1,1,1,9] example, computed longhand:
# mean = 3, population variance = (3*(1-3)^2 + (9-3)^2)/4 = 12
TAU_1119_EXPECTED = (math.sqrt(12.0) - 3.0) / (math.sqrt(12.0) + 3.0)


def test_midpoint_interpolation():
    result = attribute_timestamps([(15, 15)], np.array([10, 20]), np.array([0, 100]))
    run = result.runs[0]
    assert run.t_lo == run.t_hi == 50.0


def test_adjacent_to_left_neighbor():
    result = attribute_timestamps([(11, 11)], np.array([10, 20]), np.array([0, 100]))
    assert result.runs[0].t_lo == 10.0


def test_run_endpoints_interpolate_linearly():
    result = attribute_timestamps([(12, 18)], np.array([10, 20]), np.array([0, 100]))
    run = result.runs[0]
    assert run.t_lo == 20.0 and run.t_hi == 80.0


def test_no_neighbors_outside_hull():
    with pytest.raises(NoNeighbors):
        attribute_timestamps([(5, 6)], np.array([10, 20]), np.array([0, 100]))
    with pytest.raises(NoNeighbors):
        attribute_timestamps([(21, 22)], np.array([10, 20]), np.array([0, 100]))


def test_clock_skew_clamped_and_tallied():
    # observed ts dips at id 20; envelope raises it back to 100
    result = attribute_timestamps(
        [(15, 15), (25, 25)],
        np.array([10, 20, 30]),
        np.array([100, 40, 200]),
    )
    assert result.clamped_timestamps == 1
    t15, t25 = result.runs[0].t_lo, result.runs[1].t_lo
    assert t15 == 100.0  # flat segment after clamping
    assert t25 >= t15  # attribution stays monotone


def test_attribution_monotone_across_runs():
    rng = np.random.default_rng(3)
    ids = np.sort(rng.choice(10_000, size=2_000, replace=False))
    ts = np.sort(rng.integers(1_000_000, 2_000_000, size=2_000))
    obs = build_observed(ids).intervals
    runs = census(obs).runs
    result = attribute_timestamps(runs, ids, ts)
    starts = [r.t_lo for r in result.runs]
    assert all(a <= b for a, b in zip(starts, starts[1:]))


def test_accepts_pair_iterable():
    result = attribute_timestamps([(15, 15)], [(10, 0), (20, 100)])
    assert result.runs[0].t_lo == 50.0


def test_burstiness_tau_1119_matches_arithmetic_oracle():
    score = burstiness_score([1, 1, 1, 9])
    assert score == pytest.approx(TAU_1119_EXPECTED, abs=1e-12)
    assert score == pytest.approx(0.0718, abs=1e-4)


def test_burstiness_periodic_is_exactly_minus_one():
    runs = [(100 * k, 100 * k + 3) for k in range(1, 30)]
    result = burstiness(runs, operand="run-start")
    assert result.score == -1.0


def test_burstiness_poisson_near_zero():
    rng = np.random.default_rng(17)
    taus = rng.exponential(scale=50.0, size=10_000)
    assert abs(burstiness_score(taus)) <= 0.05


def test_burstiness_undefined_below_two_runs():
    result = burstiness([(5, 9)])
    assert result.score is None and result.n_runs == 1
    assert burstiness([], operand="run-start").score is None


def test_burstiness_scale_invariance():
    taus = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0])
    assert burstiness_score(taus) == pytest.approx(burstiness_score(taus * 1000.0), rel=1e-12)


def test_burstiness_operands():
    runs = [(0, 9), (100, 100), (250, 259)]
    start = burstiness(runs, operand="run-start")
    center = burstiness(runs, operand="run-center")
    per_id = burstiness(runs, operand="per-id")
    assert start.n_runs == center.n_runs == per_id.n_runs == 3
    # starts: 0,100,250 -> taus 100,150; centers: 4.5,100,254.5 -> taus 95.5,154.5
    assert start.score == pytest.approx(burstiness_score([100, 150]))
    assert center.score == pytest.approx(burstiness_score([95.5, 154.5]))
    assert per_id.score is not None


def test_month_helpers():
    assert month_label(0) == "1970-01"
    # 2010-01-01T00:00:00Z is month index 480
    assert month_index_of(np.array([1262304000]))[0] == 480
    assert month_label(480) == "2010-01"


def test_monthly_conservation_and_zero_gap_months():
    # observed ids 1..N over two months, no gaps
    ids = np.arange(1, 2001)
    ts = 1262304000 + (ids - 1) * 2678  # ~2 months span
    stats = monthly_stats(
        attribute_timestamps([], ids, ts), ts, rolling_window=3
    )
    assert all(row.pct_missing == 0.0 for row in stats)
    assert sum(row.observed for row in stats) == 2000


def test_monthly_split_across_boundary():
    # one run straddling the January/February 2010 boundary
    jan31_noon = 1264896000 + 43200  # 2010-01-31T12:00:00Z
    ids = np.array([100, 200])
    ts = np.array([jan31_noon - 3600, jan31_noon + 3 * 86400])
    run = AttributedRun(101, 199, jan31_noon, jan31_noon + 2 * 86400)
    stats = monthly_stats([run], ts, rolling_window=1)
    by_month = {row.month: row.missing for row in stats}
    assert by_month["2010-01"] + by_month["2010-02"] == 99
    assert by_month["2010-01"] > 0 and by_month["2010-02"] > 0


def test_rolling_window_one_equals_pct():
    spec = make_spec(seed=31, n_comments=30_000, comment_gaps=(UniformGaps(0.01),))
    plan = CorpusPlan(spec)
    ids, ts = plan.comments.observed_ids, plan.comments.timestamps
    result = census(build_observed(ids).intervals)
    attribution = attribute_timestamps(result, ids, ts)
    stats = monthly_stats(attribution, ts, rolling_window=1)
    for row in stats:
        assert row.rolling_pct == pytest.approx(row.pct_missing)


def test_monthly_sum_equals_census_total_on_generated_corpus():
    spec = make_spec(seed=32, n_comments=80_000, comment_gaps=(UniformGaps(0.01),))
    plan = CorpusPlan(spec)
    ids, ts = plan.comments.observed_ids, plan.comments.timestamps
    result = census(build_observed(ids).intervals)
    attribution = attribute_timestamps(result, ids, ts)
    stats = monthly_stats(attribution, ts)
    assert sum(row.missing for row in stats) == result.total_missing
    assert stats[-1].cumulative_missing == result.total_missing


def test_attributed_months_match_generator_truth():
    # integer seconds-per-id and zero jitter make interpolation exact
    spec = make_spec(seed=33, n_comments=40_000, comment_gaps=(UniformGaps(0.02),))
    plan = CorpusPlan(spec)
    ids, ts = plan.comments.observed_ids, plan.comments.timestamps
    result = census(build_observed(ids).intervals)
    attribution = attribute_timestamps(result, ids, ts)
    kspec = spec.comments
    for run in attribution.runs:
        for mid, t in ((run.lo, run.t_lo), (run.hi, run.t_hi)):
            true_ts = kspec.t_start + kspec.seconds_per_id * (mid - kspec.lo)
            assert t == pytest.approx(true_ts, abs=1e-6)
            assert month_index_of(np.array([t]))[0] == month_index_of(np.array([true_ts]))[0]


def test_cumulative_missing_non_decreasing():
    spec = make_spec(seed=34, n_comments=30_000, comment_gaps=(UniformGaps(0.03),))
    plan = CorpusPlan(spec)
    ids, ts = plan.comments.observed_ids, plan.comments.timestamps
    attribution = attribute_timestamps(census(build_observed(ids).intervals), ids, ts)
    stats = monthly_stats(attribution, ts)
    cums = [row.cumulative_missing for row in stats]
    assert cums == sorted(cums)
