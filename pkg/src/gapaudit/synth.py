"""Synthetic corpora with exact ground-truth manifests.

The generator plants every phenomenon the auditors look for (uniform and
bursty gaps, counter epoch jumps, dangling references, community skew,
heavy-tailed user activity) and records precisely what it planted, so
every analysis can be checked against a manifest instead of hand-computed
expectations. Output is fully determined by (spec, seed): identical specs
produce byte-identical NDJSON, regardless of how generation is chunked.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterator

import numpy as np

from .idcodec import KIND_TO_PREFIX, RecordKind, encode_base36
from .ingest import AUTHOR_SENTINEL
from .intervals import IdIntervalSet

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

BLOCK = 1_000_000

# Independent substream ids for seed derivation.
_STREAM = {"gaps": 0, "subreddit": 1, "author": 2, "structure": 3, "plants": 4,
           "deleted": 5, "weights": 6, "jitter": 7}
_KIND_INDEX = {RecordKind.COMMENT: 0, RecordKind.SUBMISSION: 1}


class InvalidSpec(ValueError):
    pass


# -- spec ------------------------------------------------------------------


@dataclass(frozen=True)
class UniformGaps:
    """Each issued ID is independently missing with probability ``rate``."""

    rate: float


@dataclass(frozen=True)
class BurstyGaps:
    """Alternating observed/missing runs with geometric lengths.

    Missing runs average ``mean_run`` IDs; observed run lengths are set so
    the long-run missing fraction is ``rate``.
    """

    rate: float
    mean_run: float = 20.0


@dataclass(frozen=True)
class EpochJump:
    """IDs in [lo, hi] were never issued (deliberate counter increment)."""

    lo: int
    hi: int


GapModel = UniformGaps | BurstyGaps | EpochJump


@dataclass(frozen=True)
class KindSpec:
    lo: int
    hi: int
    gap_models: tuple[GapModel, ...] = ()
    t_start: int = 1262304000  # 2010-01-01T00:00:00Z
    seconds_per_id: float = 30.0
    jitter: float = 0.0


@dataclass(frozen=True)
class SynthSpec:
    comments: KindSpec
    submissions: KindSpec
    seed: int = 0
    n_subreddits: int = 8
    community_skew: float = 1.0
    n_authors: int = 200
    activity_skew: float = 2.0
    dangling_plants: int = 0
    deleted_rate: float = 0.0
    top_level_fraction: float = 0.5

    def validate(self) -> None:
        if self.seed < 0:
            raise InvalidSpec("seed must be non-negative")
        if self.n_subreddits < 1 or self.n_authors < 1:
            raise InvalidSpec("need at least one subreddit and one author")
        if self.community_skew <= 0 or self.activity_skew <= 0:
            raise InvalidSpec("skew parameters must be positive")
        if not 0.0 <= self.deleted_rate < 1.0:
            raise InvalidSpec("deleted_rate must be in [0, 1)")
        if not 0.0 <= self.top_level_fraction <= 1.0:
            raise InvalidSpec("top_level_fraction must be in [0, 1]")
        if self.dangling_plants < 0:
            raise InvalidSpec("dangling_plants must be >= 0")
        for name, ks in (("comments", self.comments), ("submissions", self.submissions)):
            if ks.lo < 0 or ks.lo > ks.hi:
                raise InvalidSpec(f"{name}: bad id range [{ks.lo}, {ks.hi}]")
            if ks.seconds_per_id <= 0:
                raise InvalidSpec(f"{name}: seconds_per_id must be positive")
            if ks.jitter < 0:
                raise InvalidSpec(f"{name}: jitter must be >= 0")
            if ks.t_start <= 0:
                raise InvalidSpec(f"{name}: t_start must be positive unix seconds")
            for gm in ks.gap_models:
                if isinstance(gm, (UniformGaps, BurstyGaps)) and not 0.0 <= gm.rate < 1.0:
                    raise InvalidSpec(f"{name}: gap rate {gm.rate} outside [0, 1)")
                if isinstance(gm, BurstyGaps) and gm.mean_run < 1.0:
                    raise InvalidSpec(f"{name}: mean_run must be >= 1")
                if isinstance(gm, EpochJump) and not ks.lo < gm.lo <= gm.hi < ks.hi:
                    raise InvalidSpec(
                        f"{name}: epoch jump [{gm.lo}, {gm.hi}] must lie strictly inside the id range"
                    )

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        def kind_dict(ks: KindSpec) -> dict:
            models = []
            for gm in ks.gap_models:
                if isinstance(gm, UniformGaps):
                    models.append({"kind": "uniform", "rate": gm.rate})
                elif isinstance(gm, BurstyGaps):
                    models.append({"kind": "bursty", "rate": gm.rate, "mean_run": gm.mean_run})
                else:
                    models.append({"kind": "epoch_jump", "lo": gm.lo, "hi": gm.hi})
            return {
                "lo": ks.lo, "hi": ks.hi, "gap_models": models,
                "t_start": ks.t_start, "seconds_per_id": ks.seconds_per_id, "jitter": ks.jitter,
            }

        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("comments", "submissions")}
        out["comments"] = kind_dict(self.comments)
        out["submissions"] = kind_dict(self.submissions)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        def kind_spec(d: dict) -> KindSpec:
            models = []
            for gm in d.get("gap_models", []):
                k = gm.get("kind")
                if k == "uniform":
                    models.append(UniformGaps(float(gm["rate"])))
                elif k == "bursty":
                    models.append(BurstyGaps(float(gm["rate"]), float(gm.get("mean_run", 20.0))))
                elif k == "epoch_jump":
                    models.append(EpochJump(int(gm["lo"]), int(gm["hi"])))
                else:
                    raise InvalidSpec(f"unknown gap model kind {k!r}")
            kwargs = {k: d[k] for k in ("t_start", "seconds_per_id", "jitter") if k in d}
            return KindSpec(int(d["lo"]), int(d["hi"]), tuple(models), **kwargs)

        try:
            comments = kind_spec(data["comments"])
            submissions = kind_spec(data["submissions"])
        except KeyError as exc:
            raise InvalidSpec(f"spec missing section {exc}") from exc
        rest = {k: v for k, v in data.items() if k not in ("comments", "submissions")}
        spec = cls(comments=comments, submissions=submissions, **rest)
        spec.validate()
        return spec

    @classmethod
    def from_file(cls, path: str | Path) -> "SynthSpec":
        path = Path(path)
        if path.suffix.lower() == ".json":
            return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))


# -- manifest ---------------------------------------------------------------


@dataclass(frozen=True)
class KindTruth:
    lo: int
    hi: int
    missing: IdIntervalSet
    epoch: IdIntervalSet
    observed_total: int


@dataclass(frozen=True)
class UserTruth:
    comments: int
    submissions: int
    lost_comments: bool
    lost_submissions: bool


@dataclass(frozen=True)
class CommunityTruth:
    true_comments: int
    true_submissions: int
    observed_comments: int
    observed_submissions: int


@dataclass(frozen=True)
class SyntheticManifest:
    seed: int
    comments: KindTruth
    submissions: KindTruth
    dangling_submission_targets: np.ndarray
    dangling_comment_targets: np.ndarray
    dangling_edges: int
    dangling_per_subreddit: dict[str, dict[str, int]]
    users: dict[str, UserTruth]
    communities: dict[str, CommunityTruth]

    def kind_truth(self, kind: RecordKind) -> KindTruth:
        return self.comments if kind is RecordKind.COMMENT else self.submissions

    def to_json_dict(self) -> dict:
        def kt(t: KindTruth) -> dict:
            return {
                "range": [t.lo, t.hi],
                "missing_runs": [list(r) for r in t.missing.runs()],
                "missing_total": t.missing.cardinality,
                "epoch_runs": [list(r) for r in t.epoch.runs()],
                "observed_total": t.observed_total,
            }

        return {
            "seed": self.seed,
            "comments": kt(self.comments),
            "submissions": kt(self.submissions),
            "dangling": {
                "submission_targets": self.dangling_submission_targets.tolist(),
                "comment_targets": self.dangling_comment_targets.tolist(),
                "edges": self.dangling_edges,
                "per_subreddit": self.dangling_per_subreddit,
            },
            "users": {
                name: {"comments": u.comments, "submissions": u.submissions,
                       "lost_comments": u.lost_comments, "lost_submissions": u.lost_submissions}
                for name, u in self.users.items()
            },
            "communities": {
                name: {"true_comments": c.true_comments, "true_submissions": c.true_submissions,
                       "observed_comments": c.observed_comments, "observed_submissions": c.observed_submissions}
                for name, c in self.communities.items()
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SyntheticManifest":
        def kt(d: dict) -> KindTruth:
            return KindTruth(
                lo=int(d["range"][0]),
                hi=int(d["range"][1]),
                missing=IdIntervalSet.from_intervals([tuple(r) for r in d["missing_runs"]]),
                epoch=IdIntervalSet.from_intervals([tuple(r) for r in d["epoch_runs"]]),
                observed_total=int(d["observed_total"]),
            )

        dang = data["dangling"]
        return cls(
            seed=int(data["seed"]),
            comments=kt(data["comments"]),
            submissions=kt(data["submissions"]),
            dangling_submission_targets=np.asarray(dang["submission_targets"], dtype=np.int64),
            dangling_comment_targets=np.asarray(dang["comment_targets"], dtype=np.int64),
            dangling_edges=int(dang["edges"]),
            dangling_per_subreddit={k: dict(v) for k, v in dang["per_subreddit"].items()},
            users={k: UserTruth(**v) for k, v in data["users"].items()},
            communities={k: CommunityTruth(**v) for k, v in data["communities"].items()},
        )


# -- plan -------------------------------------------------------------------


@dataclass
class KindPlan:
    spec: KindSpec
    missing_mask: np.ndarray
    epoch_mask: np.ndarray
    observed_ids: np.ndarray
    timestamps: np.ndarray
    missing: IdIntervalSet
    epoch: IdIntervalSet

    @property
    def missing_ids(self) -> np.ndarray:
        return np.nonzero(self.missing_mask)[0] + self.spec.lo

    @property
    def n_universe(self) -> int:
        return self.spec.hi - self.spec.lo + 1


@dataclass
class CommentBlock:
    ids: np.ndarray
    created_utc: np.ndarray
    parent_values: np.ndarray
    parent_is_comment: np.ndarray
    link_values: np.ndarray
    subreddit_codes: np.ndarray
    author_codes: np.ndarray
    deleted: np.ndarray


@dataclass
class SubmissionBlock:
    ids: np.ndarray
    created_utc: np.ndarray
    subreddit_codes: np.ndarray
    author_codes: np.ndarray
    deleted: np.ndarray


@dataclass
class _PlantSet:
    sub_targets: np.ndarray
    sub_ref_idx: np.ndarray
    com_targets: np.ndarray
    com_ref_idx: np.ndarray


def _mark_ranges(n: int, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Boolean mask of length n marking half-open [start, end) ranges."""
    delta = np.zeros(n + 1, dtype=np.int32)
    keep = starts < n
    np.add.at(delta, starts[keep], 1)
    np.add.at(delta, np.minimum(ends[keep], n), -1)
    return np.cumsum(delta[:-1]) > 0


class CorpusPlan:
    """Deterministic realization of a SynthSpec, materialized block by block."""

    def __init__(self, spec: SynthSpec):
        spec.validate()
        self.spec = spec
        self.subreddit_names = [f"sub_{i:04d}" for i in range(spec.n_subreddits)]
        self.author_names = [f"user_{i:06d}" for i in range(spec.n_authors)]
        w = self._rng("weights").dirichlet(np.full(spec.n_subreddits, spec.community_skew))
        self._sub_cum = np.cumsum(w)
        aw = np.arange(1, spec.n_authors + 1, dtype=np.float64) ** -spec.activity_skew
        self._author_cum = np.cumsum(aw / aw.sum())
        self.comments = self._build_kind(RecordKind.COMMENT, spec.comments)
        self.submissions = self._build_kind(RecordKind.SUBMISSION, spec.submissions)
        self._plants = self._plan_plants()
        self._manifest: SyntheticManifest | None = None

    # -- randomness --------------------------------------------------------

    def _rng(self, purpose: str, kind: RecordKind | None = None, block: int = 0) -> np.random.Generator:
        key = [self.spec.seed, _STREAM[purpose], 0 if kind is None else _KIND_INDEX[kind] + 1, block]
        return np.random.default_rng(np.random.SeedSequence(key))

    def _uniform_at(self, purpose: str, kind: RecordKind, offsets: np.ndarray, n_universe: int) -> np.ndarray:
        """Uniform [0,1) draws for universe offsets, independent of chunking."""
        out = np.empty(offsets.size, dtype=np.float64)
        if offsets.size == 0:
            return out
        blocks = offsets // BLOCK
        for b in np.unique(blocks):
            length = min(BLOCK, n_universe - int(b) * BLOCK)
            draws = self._rng(purpose, kind, int(b)).random(length)
            sel = blocks == b
            out[sel] = draws[offsets[sel] - int(b) * BLOCK]
        return out

    def _codes_at(self, purpose: str, kind: RecordKind, offsets: np.ndarray, n_universe: int, cum: np.ndarray) -> np.ndarray:
        u = self._uniform_at(purpose, kind, offsets, n_universe)
        return np.searchsorted(cum, u, side="right")

    # -- id plan -------------------------------------------------------------

    def _build_kind(self, kind: RecordKind, ks: KindSpec) -> KindPlan:
        n = ks.hi - ks.lo + 1
        missing = np.zeros(n, dtype=bool)
        epoch = np.zeros(n, dtype=bool)
        for mi, gm in enumerate(ks.gap_models):
            if isinstance(gm, UniformGaps):
                if gm.rate > 0:
                    for b in range((n + BLOCK - 1) // BLOCK):
                        s, e = b * BLOCK, min((b + 1) * BLOCK, n)
                        rng = self._rng("gaps", kind, b * 16 + mi)
                        missing[s:e] |= rng.random(e - s) < gm.rate
            elif isinstance(gm, BurstyGaps):
                missing |= self._bursty_mask(kind, mi, n, gm)
            else:
                epoch[gm.lo - ks.lo: gm.hi - ks.lo + 1] = True
        missing &= ~epoch
        # Range endpoints are always observed: the live range of a real corpus
        # is defined by its first and last observed record, so the observed
        # hull coincides with the configured range.
        missing[0] = missing[-1] = False
        observed_mask = ~missing & ~epoch
        obs_offsets = np.nonzero(observed_mask)[0]
        observed_ids = obs_offsets + ks.lo
        ts = ks.t_start + ks.seconds_per_id * obs_offsets
        if ks.jitter > 0:
            u = self._uniform_at("jitter", kind, obs_offsets, n)
            ts = ts + (2.0 * u - 1.0) * ks.jitter
        timestamps = np.floor(ts).astype(np.int64)
        missing_set = IdIntervalSet.from_values(np.nonzero(missing)[0] + ks.lo) if missing.any() else IdIntervalSet.empty()
        epoch_set = IdIntervalSet.from_intervals(
            [(gm.lo, gm.hi) for gm in ks.gap_models if isinstance(gm, EpochJump)]
        )
        return KindPlan(ks, missing, epoch, observed_ids, timestamps, missing_set, epoch_set)

    def _bursty_mask(self, kind: RecordKind, model_index: int, n: int, gm: BurstyGaps) -> np.ndarray:
        if gm.rate <= 0:
            return np.zeros(n, dtype=bool)
        rng = self._rng("gaps", kind, (1 << 40) + model_index)
        mean_missing = max(gm.mean_run, 1.0)
        mean_observed = mean_missing * (1.0 - gm.rate) / gm.rate
        p_miss = min(1.0, 1.0 / mean_missing)
        p_obs = min(1.0, 1.0 / max(mean_observed, 1.0))
        est = int(n / (mean_missing + mean_observed) * 1.3) + 16
        obs_parts, miss_parts, total = [], [], 0
        while total < n:
            o = rng.geometric(p_obs, est)
            m = rng.geometric(p_miss, est)
            obs_parts.append(o)
            miss_parts.append(m)
            total += int(o.sum() + m.sum())
        obs_lens = np.concatenate(obs_parts)
        miss_lens = np.concatenate(miss_parts)
        segs = np.empty(obs_lens.size * 2, dtype=np.int64)
        segs[0::2] = obs_lens
        segs[1::2] = miss_lens
        ends = np.cumsum(segs)
        return _mark_ranges(n, ends[0::2], ends[1::2])

    # -- dangling plants -------------------------------------------------------

    def _plan_plants(self) -> _PlantSet:
        k = self.spec.dangling_plants
        empty = np.empty(0, dtype=np.int64)
        if k == 0:
            return _PlantSet(empty, empty, empty, empty)
        k_sub = (k + 1) // 2
        k_com = k // 2
        obs_com = self.comments.observed_ids
        n_com = obs_com.size
        if n_com < 2 * k:
            raise InvalidSpec(f"{n_com} observed comments cannot host {k} dangling plants")
        rng = self._rng("plants")

        missing_sub = self.submissions.missing_ids
        if missing_sub.size < k_sub:
            raise InvalidSpec(f"need {k_sub} missing submission ids to plant, have {missing_sub.size}")
        sub_targets = np.sort(rng.choice(missing_sub, size=k_sub, replace=False))

        com_targets = empty
        com_ref_idx = empty
        if k_com:
            ref_floor = n_com - k_com
            pool = self.comments.missing_ids
            pool = pool[pool < obs_com[ref_floor]]
            if pool.size < k_com:
                raise InvalidSpec(f"need {k_com} missing comment ids below id {int(obs_com[ref_floor])} to plant")
            com_targets = np.sort(rng.choice(pool, size=k_com, replace=False))
            com_ref_idx = np.arange(ref_floor, n_com, dtype=np.int64)

        sub_pool_hi = n_com - k_com
        sub_ref_idx = np.sort(rng.choice(sub_pool_hi, size=k_sub, replace=False).astype(np.int64))
        return _PlantSet(sub_targets, sub_ref_idx, com_targets, com_ref_idx)

    # -- record blocks ----------------------------------------------------------

    def comment_blocks(self, block_size: int = BLOCK) -> Iterator[CommentBlock]:
        plan = self.comments
        obs = plan.observed_ids
        obs_sub = self.submissions.observed_ids
        if obs_sub.size == 0 and obs.size > 0:
            raise InvalidSpec("comments cannot be generated without any observed submission")
        n_universe = plan.n_universe
        plants = self._plants
        top_frac = self.spec.top_level_fraction
        for start in range(0, obs.size, block_size):
            end = min(start + block_size, obs.size)
            idx = np.arange(start, end, dtype=np.int64)
            ids = obs[start:end]
            offsets = ids - plan.spec.lo
            u_link, u_top, u_parent = self._structure_draws(start, end)
            link = obs_sub[(u_link * obs_sub.size).astype(np.int64)]
            is_top = (u_top < top_frac) | (idx == 0)
            parent_pick = (u_parent * np.maximum(idx, 1)).astype(np.int64)
            parent = np.where(is_top, link, obs[np.minimum(parent_pick, np.maximum(idx - 1, 0))])
            parent_is_comment = ~is_top

            for targets, refs, as_comment in (
                (plants.sub_targets, plants.sub_ref_idx, False),
                (plants.com_targets, plants.com_ref_idx, True),
            ):
                if refs.size == 0:
                    continue
                sel = (refs >= start) & (refs < end)
                if not sel.any():
                    continue
                rel = refs[sel] - start
                parent[rel] = targets[sel]
                parent_is_comment[rel] = as_comment
                if not as_comment:
                    link[rel] = targets[sel]

            yield CommentBlock(
                ids=ids,
                created_utc=plan.timestamps[start:end],
                parent_values=parent,
                parent_is_comment=parent_is_comment,
                link_values=link,
                subreddit_codes=self._codes_at("subreddit", RecordKind.COMMENT, offsets, n_universe, self._sub_cum),
                author_codes=self._codes_at("author", RecordKind.COMMENT, offsets, n_universe, self._author_cum),
                deleted=self._uniform_at("deleted", RecordKind.COMMENT, offsets, n_universe) < self.spec.deleted_rate,
            )

    def _structure_draws(self, start: int, end: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Three uniform streams over observed-comment indices, chunk-invariant."""
        outs = [np.empty(end - start) for _ in range(3)]
        b0, b1 = start // BLOCK, (end - 1) // BLOCK
        for b in range(b0, b1 + 1):
            lo = max(start, b * BLOCK)
            hi = min(end, (b + 1) * BLOCK)
            draws = self._rng("structure", RecordKind.COMMENT, b).random((3, BLOCK))
            for i in range(3):
                outs[i][lo - start: hi - start] = draws[i][lo - b * BLOCK: hi - b * BLOCK]
        return outs[0], outs[1], outs[2]

    def submission_blocks(self, block_size: int = BLOCK) -> Iterator[SubmissionBlock]:
        plan = self.submissions
        obs = plan.observed_ids
        n_universe = plan.n_universe
        for start in range(0, obs.size, block_size):
            end = min(start + block_size, obs.size)
            ids = obs[start:end]
            offsets = ids - plan.spec.lo
            yield SubmissionBlock(
                ids=ids,
                created_utc=plan.timestamps[start:end],
                subreddit_codes=self._codes_at("subreddit", RecordKind.SUBMISSION, offsets, n_universe, self._sub_cum),
                author_codes=self._codes_at("author", RecordKind.SUBMISSION, offsets, n_universe, self._author_cum),
                deleted=self._uniform_at("deleted", RecordKind.SUBMISSION, offsets, n_universe) < self.spec.deleted_rate,
            )

    # -- manifest ---------------------------------------------------------------

    def manifest(self) -> SyntheticManifest:
        if self._manifest is not None:
            return self._manifest
        spec = self.spec
        n_subs, n_auth = spec.n_subreddits, spec.n_authors
        user_counts = {k: np.zeros(n_auth, dtype=np.int64) for k in RecordKind}
        user_lost = {k: np.zeros(n_auth, dtype=bool) for k in RecordKind}
        comm_true = {k: np.zeros(n_subs, dtype=np.int64) for k in RecordKind}
        comm_obs = {k: np.zeros(n_subs, dtype=np.int64) for k in RecordKind}

        for kind, plan in ((RecordKind.COMMENT, self.comments), (RecordKind.SUBMISSION, self.submissions)):
            n = plan.n_universe
            for b in range((n + BLOCK - 1) // BLOCK):
                s, e = b * BLOCK, min((b + 1) * BLOCK, n)
                offs = np.arange(s, e, dtype=np.int64)
                subs = self._codes_at("subreddit", kind, offs, n, self._sub_cum)
                auths = self._codes_at("author", kind, offs, n, self._author_cum)
                miss = plan.missing_mask[s:e]
                issued = ~plan.epoch_mask[s:e]
                observed = issued & ~miss
                user_counts[kind] += np.bincount(auths[issued], minlength=n_auth)
                user_lost[kind][np.unique(auths[miss])] = True
                comm_true[kind] += np.bincount(subs[issued], minlength=n_subs)
                comm_obs[kind] += np.bincount(subs[observed], minlength=n_subs)

        plants = self._plants
        per_sub: dict[str, dict[str, int]] = {}
        for refs, key in ((plants.sub_ref_idx, "submissions"), (plants.com_ref_idx, "comments")):
            if refs.size == 0:
                continue
            offsets = self.comments.observed_ids[refs] - spec.comments.lo
            codes = self._codes_at("subreddit", RecordKind.COMMENT, offsets, self.comments.n_universe, self._sub_cum)
            for c in codes.tolist():
                name = self.subreddit_names[c]
                per_sub.setdefault(name, {"submissions": 0, "comments": 0})[key] += 1

        users = {
            self.author_names[i]: UserTruth(
                comments=int(user_counts[RecordKind.COMMENT][i]),
                submissions=int(user_counts[RecordKind.SUBMISSION][i]),
                lost_comments=bool(user_lost[RecordKind.COMMENT][i]),
                lost_submissions=bool(user_lost[RecordKind.SUBMISSION][i]),
            )
            for i in range(n_auth)
        }
        communities = {
            self.subreddit_names[i]: CommunityTruth(
                true_comments=int(comm_true[RecordKind.COMMENT][i]),
                true_submissions=int(comm_true[RecordKind.SUBMISSION][i]),
                observed_comments=int(comm_obs[RecordKind.COMMENT][i]),
                observed_submissions=int(comm_obs[RecordKind.SUBMISSION][i]),
            )
            for i in range(n_subs)
        }
        self._manifest = SyntheticManifest(
            seed=spec.seed,
            comments=KindTruth(
                spec.comments.lo, spec.comments.hi, self.comments.missing,
                self.comments.epoch, int(self.comments.observed_ids.size),
            ),
            submissions=KindTruth(
                spec.submissions.lo, spec.submissions.hi, self.submissions.missing,
                self.submissions.epoch, int(self.submissions.observed_ids.size),
            ),
            dangling_submission_targets=plants.sub_targets,
            dangling_comment_targets=plants.com_targets,
            dangling_edges=2 * plants.sub_targets.size + plants.com_targets.size,
            dangling_per_subreddit=per_sub,
            users=users,
            communities=communities,
        )
        return self._manifest


# -- NDJSON emission ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratedCorpus:
    comments_path: Path
    submissions_path: Path
    manifest_path: Path
    manifest: SyntheticManifest


def _dump_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def generate(spec: SynthSpec, out_dir: str | Path) -> GeneratedCorpus:
    """Write comments.ndjson, submissions.ndjson and manifest.json.

    Every non-missing ID in range yields one record; deleted records are
    emitted truncated (sentinel author/body) but present. Byte-identical
    for identical (spec, seed).
    """
    plan = CorpusPlan(spec)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    subs, auths = plan.subreddit_names, plan.author_names
    prefix = {True: KIND_TO_PREFIX[RecordKind.COMMENT], False: KIND_TO_PREFIX[RecordKind.SUBMISSION]}

    comments_path = out_dir / "comments.ndjson"
    with open(comments_path, "w", encoding="utf-8", newline="") as fh:
        for block in plan.comment_blocks():
            rows = []
            for i in range(block.ids.size):
                b36 = encode_base36(int(block.ids[i]))
                deleted = bool(block.deleted[i])
                rows.append(_dump_line({
                    "id": b36,
                    "parent_id": f"{prefix[bool(block.parent_is_comment[i])]}_{encode_base36(int(block.parent_values[i]))}",
                    "link_id": f"t3_{encode_base36(int(block.link_values[i]))}",
                    "author": AUTHOR_SENTINEL if deleted else auths[int(block.author_codes[i])],
                    "subreddit": subs[int(block.subreddit_codes[i])],
                    "created_utc": int(block.created_utc[i]),
                    "body": "[deleted]" if deleted else f"c-{b36}",
                }))
            fh.write("".join(rows))

    submissions_path = out_dir / "submissions.ndjson"
    with open(submissions_path, "w", encoding="utf-8", newline="") as fh:
        for block in plan.submission_blocks():
            rows = []
            for i in range(block.ids.size):
                b36 = encode_base36(int(block.ids[i]))
                deleted = bool(block.deleted[i])
                rows.append(_dump_line({
                    "id": b36,
                    "author": AUTHOR_SENTINEL if deleted else auths[int(block.author_codes[i])],
                    "subreddit": subs[int(block.subreddit_codes[i])],
                    "created_utc": int(block.created_utc[i]),
                    "title": f"s-{b36}",
                    "selftext": "[deleted]" if deleted else f"body-{b36}",
                }))
            fh.write("".join(rows))

    manifest = plan.manifest()
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        json.dump(manifest.to_json_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return GeneratedCorpus(comments_path, submissions_path, manifest_path, manifest)
