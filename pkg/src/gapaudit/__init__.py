"""gapaudit: integrity auditing for trace corpora with sequential base-36 IDs.

Detects, quantifies and characterizes missing records: gap census over
the ID space, dangling-reference audit, temporal attribution and
burstiness of gaps, per-user risk modeling, per-community statistics,
and a synthetic-corpus generator with exact ground truth for validation.
"""

__version__ = "0.1.0"

from .census import (
    CensusResult,
    EmptyObservedSet,
    ExclusionRange,
    ObservedBuild,
    build_observed,
    census,
    detect_discontinuities,
    load_exclusions,
)
from .communities import (
    CommunityGapStats,
    RankDeficient,
    RegressionFit,
    TooFewObservations,
    aggregate_communities,
    fit_missingness_model,
    ols_fit,
    threshold_report,
)
from .idcodec import (
    CodecError,
    InvalidDigit,
    MalformedFullname,
    Overflow,
    RecordId,
    RecordKind,
    UnknownPrefix,
    decode_base36,
    encode_base36,
    parse_fullname,
)
from .ingest import (
    CommentColumns,
    CommentRecord,
    IngestStats,
    MalformedLine,
    ShardIngest,
    SubmissionColumns,
    SubmissionRecord,
    WrongKind,
    ingest_shard,
    load_columns,
    merge_stats,
)
from .intervals import IdIntervalSet, IntervalAccumulator
from .references import (
    DanglingReport,
    ReferenceAuditor,
    UnknownSubreddit,
    audit_references,
    community_dangling_profile,
)
from .risk import (
    EmptyPopulation,
    MissingRates,
    RiskPopulationSummary,
    SampleTooLarge,
    UserRiskProfile,
    build_profiles,
    population_summary,
    sample_users,
    user_risk,
)
from .sweep import FaultyStore, MockStore, SweepResult, inject_faults, sweep
from .synth import (
    BurstyGaps,
    CorpusPlan,
    EpochJump,
    GeneratedCorpus,
    InvalidSpec,
    KindSpec,
    SyntheticManifest,
    SynthSpec,
    UniformGaps,
    generate,
)
from .temporal import (
    AttributedRun,
    AttributionResult,
    BurstinessResult,
    MonthlyGapStats,
    NoNeighbors,
    attribute_timestamps,
    burstiness,
    burstiness_score,
    monthly_stats,
)
