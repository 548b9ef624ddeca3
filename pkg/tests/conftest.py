import json

import pytest

from gapaudit.synth import KindSpec, SynthSpec, UniformGaps


def make_spec(
    seed=7,
    n_comments=20_000,
    n_submissions=8_000,
    comment_gaps=(UniformGaps(0.01),),
    submission_gaps=(UniformGaps(0.02),),
    plants=0,
    comment_seconds=120,
    submission_seconds=300,
    **overrides,
) -> SynthSpec:
    """Small, fast spec for unit tests; ranges sized in ids, not records."""
    kwargs = dict(
        comments=KindSpec(lo=1000, hi=1000 + n_comments - 1, gap_models=tuple(comment_gaps),
                          t_start=1262304000, seconds_per_id=comment_seconds),
        submissions=KindSpec(lo=500, hi=500 + n_submissions - 1, gap_models=tuple(submission_gaps),
                             t_start=1262304000, seconds_per_id=submission_seconds),
        seed=seed,
        n_subreddits=6,
        n_authors=50,
        dangling_plants=plants,
    )
    kwargs.update(overrides)
    return SynthSpec(**kwargs)


@pytest.fixture
def ndjson_writer(tmp_path):
    """Write a list of dicts as one NDJSON file and return its path."""

    def write(name, objs):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for obj in objs:
                fh.write(json.dumps(obj) + "\n")
        return path

    return write


def comment_line(id_, parent="t3_1", link="t3_1", author="alice", subreddit="pics",
                 created=1300000000, body="hello", **extra):
    obj = {"id": id_, "parent_id": parent, "link_id": link, "author": author,
           "subreddit": subreddit, "created_utc": created, "body": body}
    obj.update(extra)
    return obj


def submission_line(id_, author="alice", subreddit="pics", created=1300000000,
                    selftext="text", **extra):
    obj = {"id": id_, "author": author, "subreddit": subreddit,
           "created_utc": created, "selftext": selftext}
    obj.update(extra)
    return obj
