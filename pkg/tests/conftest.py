import numpy as np
import pytest

import hiresim as hs
from hiresim.cohort import TEST_NAMES, TRAITS, CandidateRecord, Cohort, Provenance, TraitProfile


def make_cohort_from_profiles(rows, ids=None, gender=None):
    """Cohort with explicit trait profiles; raw tests are placeholder zeros."""
    n = len(rows)
    ids = ids or [f"c{i:03d}" for i in range(n)]
    gender = gender or ["g"] * n
    records, profiles = [], []
    for cid, row, g in sorted(zip(ids, rows, gender), key=lambda t: t[0]):
        records.append(CandidateRecord(
            candidate_id=cid, gender=g, age_group="a", education_level="e", country="c",
            raw_tests={t: 0.0 for t in TEST_NAMES},
        ))
        profiles.append(TraitProfile(cid, dict(zip(TRAITS, [float(v) for v in row]))))
    return Cohort(records, profiles, Provenance("file", "<fixture>"))


def make_records(raw_rows, ids=None):
    """CandidateRecords from rows of 11 raw scores (canonical test order)."""
    n = len(raw_rows)
    ids = ids or [f"c{i:03d}" for i in range(n)]
    return [
        CandidateRecord(
            candidate_id=cid, gender="g", age_group="a", education_level="e", country="c",
            raw_tests=dict(zip(TEST_NAMES, [float(v) for v in row])),
        )
        for cid, row in zip(ids, raw_rows)
    ]


def csv_text(rows, header=None):
    header = header if header is not None else ",".join(hs.COHORT_HEADER)
    return "\n".join([header, *rows]) + "\n"


def valid_csv_row(cid, scores=None):
    scores = scores if scores is not None else list(range(11))
    return ",".join([cid, "female", "18_29", "bachelors", "usa", *map(str, scores)])


def iter_delta_values(deltas):
    """Yield exactly the delta-valued fields of a report's deltas section."""
    yield deltas["accuracy"]
    yield deltas["selection_rate_overall"]
    for rows in deltas["selection_rates"].values():
        for row in rows:
            yield row["delta"]
    for rows in deltas["fairness"].values():
        for row in rows:
            for key in ("tpr", "fpr", "ppv", "npv", "selection_rate"):
                yield row[key]
    for rows in deltas["label_positive_share"].values():
        for row in rows:
            yield row["delta"]
    for rows in deltas["score_median"].values():
        for row in rows:
            yield row["delta"]
    for row in deltas["rank_table"]:
        yield row["rank_delta"]


@pytest.fixture(scope="session")
def small_cohort():
    return hs.generate_synthetic_cohort(hs.SyntheticCohortSpec(size=80), 11)


@pytest.fixture(scope="session")
def shifted_cohort():
    spec = hs.SyntheticCohortSpec(
        size=400,
        group_fractions={
            "gender": {"x": 0.5, "y": 0.5},
            "age_group": {"young": 0.6, "old": 0.4},
            "education_level": {"hs": 0.5, "uni": 0.5},
            "country": {"p": 0.4, "q": 0.35, "r": 0.25},
        },
        trait_shifts={"gender": {"x": {"reasoning": 0.5}}},
    )
    return hs.generate_synthetic_cohort(spec, 123)


@pytest.fixture(scope="session")
def tiny_result(small_cohort):
    """One full engine run on the small cohort, reused by read-only tests."""
    config = hs.SessionConfig(
        cohort=small_cohort,
        weights_a=hs.WeightVector.from_csv("5,3,8,1,2"),
        weights_b=hs.WeightVector.from_csv("1,6,0,7,4"),
        master_seed=9,
    )
    return hs.run_simulation(config)
