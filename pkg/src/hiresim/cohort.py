"""Cohort ingestion, orientation, min-max normalization, trait aggregation,
and synthetic cohort generation with controllable group disparities.

A cohort file is UTF-8 CSV with the exact header::

    candidate_id,gender,age_group,education_level,country,<the eleven test columns>

Eleven psychometric tests aggregate into five traits by unweighted mean of
the per-test min-max-normalized scores (timed tests are lower-is-better by
default and get negated before scaling).
"""

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateTestWarning,
    DuplicateCandidateId,
    EmptyCohort,
    InvalidCohortFile,
    InvalidSpec,
    MissingColumn,
    NonFiniteScore,
)

TRAITS = (
    "memory",
    "information_processing_speed",
    "reasoning",
    "attention",
    "behavioral_restraint",
)

TRAIT_TESTS = {
    "memory": (
        "forward_memory_span",
        "reverse_memory_span",
        "verbal_list_learning",
        "delayed_verbal_list_learning",
    ),
    "information_processing_speed": (
        "digit_symbol_coding",
        "trail_making_a",
        "trail_making_b",
    ),
    "reasoning": ("arithmetic_reasoning", "grammatical_reasoning"),
    "attention": ("divided_visual_attention",),
    "behavioral_restraint": ("go_no_go",),
}

TEST_NAMES = tuple(t for trait in TRAITS for t in TRAIT_TESTS[trait])

TEST_TRAIT = {test: trait for trait, tests in TRAIT_TESTS.items() for test in tests}

DEMOGRAPHIC_ATTRIBUTES = ("gender", "age_group", "education_level", "country")

COHORT_HEADER = ("candidate_id", *DEMOGRAPHIC_ATTRIBUTES, *TEST_NAMES)

# Timed tests: a lower completion time is the better score.
DEFAULT_LOWER_IS_BETTER = frozenset({"trail_making_a", "trail_making_b"})


@dataclass(frozen=True)
class CandidateRecord:
    """One person's demographics plus the eleven raw test scores."""

    candidate_id: str
    gender: str
    age_group: str
    education_level: str
    country: str
    raw_tests: dict

    def demographic(self, attribute: str) -> str:
        return getattr(self, attribute)


@dataclass(frozen=True)
class TraitProfile:
    """Five aggregated trait scores in [0, 1], aligned to a candidate."""

    candidate_id: str
    trait_scores: dict

    def as_array(self) -> np.ndarray:
        return np.array([self.trait_scores[t] for t in TRAITS])


@dataclass(frozen=True)
class DirectionConfig:
    """Per-test orientation: True means higher raw score is better.

    Covers exactly the eleven test names; a config file only needs to list
    the tests it overrides.
    """

    higher_is_better: dict

    def __post_init__(self):
        keys = set(self.higher_is_better)
        if keys != set(TEST_NAMES):
            raise InvalidSpec(
                f"direction config must cover exactly the eleven tests; "
                f"missing={sorted(set(TEST_NAMES) - keys)} unknown={sorted(keys - set(TEST_NAMES))}"
            )

    @classmethod
    def default(cls) -> "DirectionConfig":
        return cls({t: t not in DEFAULT_LOWER_IS_BETTER for t in TEST_NAMES})

    @classmethod
    def from_file(cls, path) -> "DirectionConfig":
        """Parse ``test_name=higher|lower`` lines, overriding the defaults."""
        directions = dict(cls.default().higher_is_better)
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                name, _, value = line.partition("=")
                name, value = name.strip(), value.strip().lower()
                if name not in TEST_NAMES:
                    raise InvalidSpec(f"{path}:{lineno}: unknown test {name!r}")
                if value not in ("higher", "lower"):
                    raise InvalidSpec(f"{path}:{lineno}: direction must be 'higher' or 'lower', got {value!r}")
                directions[name] = value == "higher"
        return cls(directions)


@dataclass(frozen=True)
class Provenance:
    """Where a cohort came from: a file path or a synthetic spec plus seed."""

    kind: str  # "file" | "synthetic"
    source: str  # file path, or canonical JSON of the synthetic spec
    seed: int | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "source": self.source, "seed": self.seed}


class Cohort:
    """Immutable, candidate_id-ordered records with aligned trait profiles."""

    def __init__(self, records, profiles, provenance: Provenance):
        records = tuple(records)
        profiles = tuple(profiles)
        if len(records) != len(profiles):
            raise ValueError("records and profiles must have the same length")
        for rec, prof in zip(records, profiles):
            if rec.candidate_id != prof.candidate_id:
                raise ValueError(f"record/profile misalignment at {rec.candidate_id!r}")
        ids = [r.candidate_id for r in records]
        if ids != sorted(ids):
            raise ValueError("cohort records must be sorted ascending by candidate_id")
        self.records = records
        self.profiles = profiles
        self.provenance = provenance
        self._trait_matrix = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def candidate_ids(self) -> tuple:
        return tuple(r.candidate_id for r in self.records)

    def trait_matrix(self) -> np.ndarray:
        """(n, 5) array of trait scores in canonical trait order."""
        if self._trait_matrix is None:
            self._trait_matrix = np.array([p.as_array() for p in self.profiles])
            self._trait_matrix.setflags(write=False)
        return self._trait_matrix

    def group_values(self, attribute: str) -> tuple:
        """Distinct values of a demographic attribute, sorted."""
        return tuple(sorted({r.demographic(attribute) for r in self.records}))

    def group_of(self, attribute: str) -> dict:
        return {r.candidate_id: r.demographic(attribute) for r in self.records}


def normalize_and_aggregate(records, directions: DirectionConfig | None = None):
    """Orient, min-max scale each test across the cohort, and average into traits.

    A zero-range test column cannot be scaled; every candidate gets 0.5 for it
    (warned, not an error) so tiny fixtures stay usable.
    """
    directions = directions or DirectionConfig.default()
    records = list(records)
    if len(records) < 2:
        raise EmptyCohort("normalization needs at least 2 candidates")

    raw = np.array([[r.raw_tests[t] for t in TEST_NAMES] for r in records], dtype=float)
    for col, test in enumerate(TEST_NAMES):
        if not directions.higher_is_better[test]:
            raw[:, col] = -raw[:, col]

    lo = raw.min(axis=0)
    hi = raw.max(axis=0)
    normalized = np.empty_like(raw)
    for col, test in enumerate(TEST_NAMES):
        span = hi[col] - lo[col]
        if span == 0.0:
            warnings.warn(
                DegenerateTestWarning(f"test {test!r} has zero range across the cohort; scores set to 0.5")
            )
            normalized[:, col] = 0.5
        else:
            normalized[:, col] = (raw[:, col] - lo[col]) / span

    col_index = {t: i for i, t in enumerate(TEST_NAMES)}
    profiles = []
    for row, rec in enumerate(records):
        scores = {}
        for trait in TRAITS:
            cols = [col_index[t] for t in TRAIT_TESTS[trait]]
            scores[trait] = float(normalized[row, cols].mean())
        profiles.append(TraitProfile(rec.candidate_id, scores))
    return profiles


def _parse_score(value, candidate_id, test) -> float:
    try:
        score = float(value)
    except (TypeError, ValueError):
        raise NonFiniteScore(candidate_id, test) from None
    if not math.isfinite(score):
        raise NonFiniteScore(candidate_id, test)
    return score


def _records_from_rows(header, rows):
    if tuple(header or ()) != COHORT_HEADER:
        missing = [c for c in COHORT_HEADER if c not in (header or ())]
        if missing:
            raise MissingColumn(missing)
        raise InvalidCohortFile(
            f"header must be exactly {','.join(COHORT_HEADER)!r} (check column order and extras)"
        )
    records = []
    seen = set()
    for rownum, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(COHORT_HEADER):
            raise InvalidCohortFile(f"row {rownum}: expected {len(COHORT_HEADER)} fields, got {len(row)}")
        values = dict(zip(COHORT_HEADER, (v.strip() for v in row)))
        cid = values["candidate_id"]
        if not cid:
            raise InvalidCohortFile(f"row {rownum}: empty candidate_id")
        if cid in seen:
            raise DuplicateCandidateId(cid)
        seen.add(cid)
        records.append(CandidateRecord(
            candidate_id=cid,
            gender=values["gender"],
            age_group=values["age_group"],
            education_level=values["education_level"],
            country=values["country"],
            raw_tests={t: _parse_score(values[t], cid, t) for t in TEST_NAMES},
        ))
    if len(records) < 2:
        raise EmptyCohort("cohort file must contain at least 2 candidates")
    records.sort(key=lambda r: r.candidate_id)
    return records


def load_cohort(path, directions: DirectionConfig | None = None) -> Cohort:
    """Load and validate a cohort CSV; profiles are normalized on the way in."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        records = _records_from_rows(header, reader)
    profiles = normalize_and_aggregate(records, directions)
    return Cohort(records, profiles, Provenance("file", str(path)))


def cohort_from_csv_text(text: str, directions: DirectionConfig | None = None,
                         source: str = "<inline>") -> Cohort:
    """Same validation as :func:`load_cohort` for an in-memory CSV string."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    records = _records_from_rows(header, reader)
    profiles = normalize_and_aggregate(records, directions)
    return Cohort(records, profiles, Provenance("file", source))


def write_cohort_csv(cohort: Cohort, path) -> None:
    """Write the documented CSV format; floats use shortest round-trip repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COHORT_HEADER)
        for rec in cohort.records:
            writer.writerow([
                rec.candidate_id, rec.gender, rec.age_group, rec.education_level, rec.country,
                *(repr(rec.raw_tests[t]) for t in TEST_NAMES),
            ])


# --- synthetic generation ----------------------------------------------------

# Baseline (mean, sd) per test in test-native units. Spans are item counts,
# trail-making scores are seconds, the rest are points/accuracy-like scales.
TEST_BASELINES = {
    "forward_memory_span": (7.0, 1.6),
    "reverse_memory_span": (5.5, 1.4),
    "verbal_list_learning": (24.0, 5.0),
    "delayed_verbal_list_learning": (8.5, 2.5),
    "digit_symbol_coding": (54.0, 10.0),
    "trail_making_a": (32.0, 9.0),
    "trail_making_b": (68.0, 20.0),
    "arithmetic_reasoning": (14.0, 4.0),
    "grammatical_reasoning": (38.0, 8.0),
    "divided_visual_attention": (72.0, 12.0),
    "go_no_go": (0.82, 0.08),
}

DEFAULT_GROUP_FRACTIONS = {
    "gender": {"female": 0.5, "male": 0.5},
    "age_group": {"18_29": 0.3, "30_44": 0.35, "45_59": 0.25, "60_plus": 0.1},
    "education_level": {"high_school": 0.3, "bachelors": 0.4, "masters": 0.22, "doctorate": 0.08},
    "country": {"usa": 0.35, "uk": 0.2, "canada": 0.15, "india": 0.2, "other": 0.1},
}

# Demo disparities for the built-in cohort; entirely synthetic knobs.
DEFAULT_TRAIT_SHIFTS = {
    "gender": {"female": {"memory": 0.2}, "male": {"reasoning": 0.2}},
    "age_group": {"60_plus": {"information_processing_speed": -0.4}},
    "country": {"usa": {"information_processing_speed": 0.3}, "india": {"reasoning": 0.25}},
}


@dataclass(frozen=True)
class SyntheticCohortSpec:
    """Controls for the synthetic generator.

    trait_shifts are per (attribute, group, trait) mean shifts in units of the
    test baseline sd, applied to every test in the trait (orientation-aware:
    a positive shift always improves the trait).
    """

    size: int
    group_fractions: dict = field(default_factory=lambda: DEFAULT_GROUP_FRACTIONS)
    trait_shifts: dict = field(default_factory=dict)
    noise_scale: float = 1.0

    def __post_init__(self):
        if self.size < 10:
            raise InvalidSpec(f"synthetic cohort size must be >= 10, got {self.size}")
        if not (isinstance(self.noise_scale, (int, float)) and self.noise_scale > 0
                and math.isfinite(self.noise_scale)):
            raise InvalidSpec(f"noise_scale must be a positive finite number, got {self.noise_scale!r}")
        for attr, fractions in self.group_fractions.items():
            if attr not in DEMOGRAPHIC_ATTRIBUTES:
                raise InvalidSpec(f"unknown demographic attribute {attr!r}")
            if not fractions:
                raise InvalidSpec(f"{attr}: needs at least one group")
            if any(f < 0 for f in fractions.values()):
                raise InvalidSpec(f"{attr}: fractions must be non-negative")
            total = sum(fractions.values())
            if abs(total - 1.0) > 1e-9:
                raise InvalidSpec(f"{attr}: group fractions must sum to 1, got {total}")
        for attr in DEMOGRAPHIC_ATTRIBUTES:
            if attr not in self.group_fractions:
                raise InvalidSpec(f"group_fractions missing attribute {attr!r}")
        for attr, groups in self.trait_shifts.items():
            if attr not in DEMOGRAPHIC_ATTRIBUTES:
                raise InvalidSpec(f"trait_shifts: unknown attribute {attr!r}")
            for value, shifts in groups.items():
                if value not in self.group_fractions[attr]:
                    raise InvalidSpec(f"trait_shifts: {attr}={value!r} is not a configured group")
                for trait in shifts:
                    if trait not in TRAITS:
                        raise InvalidSpec(f"trait_shifts: unknown trait {trait!r}")

    def canonical_json(self) -> str:
        return json.dumps({
            "size": self.size,
            "group_fractions": self.group_fractions,
            "trait_shifts": self.trait_shifts,
            "noise_scale": self.noise_scale,
        }, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SyntheticCohortSpec":
        data = json.loads(text)
        return cls(
            size=data["size"],
            group_fractions=data.get("group_fractions", DEFAULT_GROUP_FRACTIONS),
            trait_shifts=data.get("trait_shifts", {}),
            noise_scale=data.get("noise_scale", 1.0),
        )


def default_synthetic_spec(size: int = 2000) -> SyntheticCohortSpec:
    """The built-in demo spec: default fractions plus mild group disparities."""
    return SyntheticCohortSpec(size=size, trait_shifts=DEFAULT_TRAIT_SHIFTS)


def _quota_counts(fractions: dict, size: int) -> dict:
    """Largest-remainder apportionment; deterministic, within 1 of exact."""
    items = sorted(fractions.items())
    floors = {name: int(math.floor(frac * size)) for name, frac in items}
    remainders = sorted(
        ((frac * size - floors[name], name) for name, frac in items),
        key=lambda pair: (-pair[0], pair[1]),
    )
    short = size - sum(floors.values())
    for _, name in remainders[:short]:
        floors[name] += 1
    return floors


def generate_synthetic_cohort(spec: SyntheticCohortSpec, seed: int) -> Cohort:
    """Deterministic Gaussian cohort with per-group trait shifts.

    PCG64 seeded by ``seed``; the same (spec, seed) pair always reproduces
    the same cohort byte for byte.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n = spec.size
    directions = DirectionConfig.default()

    assignments = {}
    for attr in DEMOGRAPHIC_ATTRIBUTES:
        counts = _quota_counts(spec.group_fractions[attr], n)
        pool = [name for name in sorted(counts) for _ in range(counts[name])]
        order = rng.permutation(n)
        assignments[attr] = [pool[i] for i in order]

    noise = rng.standard_normal((n, len(TEST_NAMES)))
    records = []
    for i in range(n):
        cid = f"c{i + 1:06d}"
        demo = {attr: assignments[attr][i] for attr in DEMOGRAPHIC_ATTRIBUTES}
        trait_shift = {t: 0.0 for t in TRAITS}
        for attr, groups in spec.trait_shifts.items():
            shifts = groups.get(demo[attr])
            if shifts:
                for trait, amount in shifts.items():
                    trait_shift[trait] += amount
        raw = {}
        for col, test in enumerate(TEST_NAMES):
            mean, sd = TEST_BASELINES[test]
            sign = 1.0 if directions.higher_is_better[test] else -1.0
            raw[test] = float(mean + sd * (sign * trait_shift[TEST_TRAIT[test]] + spec.noise_scale * noise[i, col]))
        records.append(CandidateRecord(cid, demo["gender"], demo["age_group"],
                                       demo["education_level"], demo["country"], raw))

    profiles = normalize_and_aggregate(records, directions)
    return Cohort(records, profiles, Provenance("synthetic", spec.canonical_json(), seed))
