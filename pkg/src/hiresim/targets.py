"""Turns trait-importance weights into composite scores and 0/1 labels.

Labeling: candidates below the configurable percentile cut (default 85th)
are labeled 0; from the remaining top subset, ``positive_count`` candidates
(default 100) are drawn without replacement with linearly decreasing weights
from ``weight_high`` for the best-ranked to ``weight_low`` for the worst,
and labeled 1.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cohort import TRAITS, Cohort
from .errors import DomainError, InvalidSpec, ZeroWeightVector


@dataclass(frozen=True)
class WeightVector:
    """User-chosen importance of the five traits (slider values)."""

    weights: dict

    def __post_init__(self):
        if set(self.weights) != set(TRAITS):
            raise ZeroWeightVector(
                f"weights must cover exactly the five traits, got {sorted(self.weights)}"
            )
        values = [self.weights[t] for t in TRAITS]
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise ZeroWeightVector(f"weights must be finite and non-negative, got {values}")
        if all(v == 0 for v in values):
            raise ZeroWeightVector("at least one trait weight must be strictly positive")

    @classmethod
    def from_csv(cls, text: str) -> "WeightVector":
        """Five comma-separated reals in canonical trait order."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != len(TRAITS):
            raise ZeroWeightVector(f"expected {len(TRAITS)} comma-separated weights, got {len(parts)}")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ZeroWeightVector(f"weights must be numeric, got {text!r}") from None
        return cls(dict(zip(TRAITS, values)))

    @classmethod
    def from_mapping(cls, mapping) -> "WeightVector":
        try:
            converted = {k: float(v) for k, v in mapping.items()}
        except (TypeError, ValueError):
            raise ZeroWeightVector(f"weights must be numeric, got {mapping!r}") from None
        return cls(converted)

    def as_array(self) -> np.ndarray:
        return np.array([self.weights[t] for t in TRAITS], dtype=float)

    def normalized(self) -> np.ndarray:
        values = self.as_array()
        return values / values.sum()

    def canonical_key(self) -> str:
        """Stable string form used for seed derivation and config echo."""
        return ",".join(repr(float(self.weights[t])) for t in TRAITS)

    def to_dict(self) -> dict:
        return {t: float(self.weights[t]) for t in TRAITS}


@dataclass(frozen=True)
class ScoredCandidate:
    candidate_id: str
    composite_score: float
    rank: int  # 1-based, descending score, ties broken by ascending id


@dataclass(frozen=True)
class LabelingPolicy:
    percentile_cut: float = 0.85
    positive_count: int = 100
    weight_high: float = 0.99
    weight_low: float = 0.01

    def __post_init__(self):
        if not 0 < self.percentile_cut < 1:
            raise InvalidSpec(f"percentile_cut must be in (0, 1), got {self.percentile_cut}")
        if self.positive_count < 1:
            raise InvalidSpec(f"positive_count must be >= 1, got {self.positive_count}")
        if not self.weight_low < self.weight_high:
            raise InvalidSpec(
                f"weight_low must be below weight_high, got {self.weight_low} >= {self.weight_high}"
            )

    @property
    def weight_span(self) -> float:
        return self.weight_high - self.weight_low

    def to_dict(self) -> dict:
        return {
            "percentile_cut": self.percentile_cut,
            "positive_count": self.positive_count,
            "weight_high": self.weight_high,
            "weight_low": self.weight_low,
            "weight_span": self.weight_span,
        }


@dataclass(frozen=True)
class LabeledDataset:
    """A cohort labeled under one target-variable definition."""

    cohort: Cohort | None
    labels: dict  # candidate_id -> 0/1
    scored: tuple  # ScoredCandidate, rank order
    top_subset_ids: tuple  # rank order, the pool positives are drawn from
    sampling_seed: int

    def positive_ids(self) -> tuple:
        return tuple(s.candidate_id for s in self.scored if self.labels[s.candidate_id] == 1)


def composite_scores(cohort: Cohort, w: WeightVector):
    """Weighted average of trait scores; weights are normalized to sum 1.

    Ranks are assigned by descending score with ties broken by ascending
    candidate_id, so the ordering is total and reproducible.
    """
    w_hat = w.normalized()
    scores = cohort.trait_matrix() @ w_hat
    ids = cohort.candidate_ids
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    return [
        ScoredCandidate(ids[i], float(scores[i]), rank)
        for rank, i in enumerate(order, start=1)
    ]


def sampling_weight(x: int, n: int, policy: LabelingPolicy | None = None) -> float:
    """Linear sampling weight for the candidate ranked x of n in the top subset.

    f(1) = weight_high, f(n) = weight_low, strictly decreasing in between.
    Undefined for n < 2 (the line through two distinct points needs them).
    """
    policy = policy or LabelingPolicy()
    if n < 2:
        raise DomainError(f"sampling weights need a top subset of at least 2, got n={n}")
    if not 1 <= x <= n:
        raise DomainError(f"rank x={x} outside 1..{n}")
    return policy.weight_span / (1 - n) * x + (policy.weight_low - policy.weight_high * n) / (1 - n)


def _sampling_weights(n: int, policy: LabelingPolicy) -> np.ndarray:
    x = np.arange(1, n + 1, dtype=float)
    return policy.weight_span / (1 - n) * x + (policy.weight_low - policy.weight_high * n) / (1 - n)


def _top_subset_size(n: int, percentile_cut: float) -> int:
    # ceil((1 - cut) * n) in exact rational arithmetic; IEEE doubles get
    # ceil(0.15 * 2000) wrong (301), and the cut is meant as a decimal.
    cut = Fraction(round(percentile_cut * 10**9), 10**9)
    return math.ceil((1 - cut) * n)


def assign_labels(scored, policy: LabelingPolicy | None = None, seed: int = 0,
                  cohort: Cohort | None = None) -> LabeledDataset:
    """Label the top percentile subset via weighted sampling without replacement.

    If the top subset is not larger than positive_count, all of it is labeled
    1 deterministically (no draws). Otherwise positive_count sequential draws
    are made from a PCG64 generator seeded by ``seed``: each draw picks index
    i with probability weight_i / sum(remaining weights), then removes it.
    """
    policy = policy or LabelingPolicy()
    scored = sorted(scored, key=lambda s: s.rank)
    n = len(scored)
    if n < 2:
        raise DomainError(f"labeling needs at least 2 scored candidates, got {n}")

    top_count = _top_subset_size(n, policy.percentile_cut)
    top_ids = tuple(s.candidate_id for s in scored[:top_count])

    if top_count <= policy.positive_count:
        positive = set(top_ids)
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        weights = _sampling_weights(top_count, policy)
        remaining = np.arange(top_count)
        chosen = []
        for _ in range(policy.positive_count):
            w = weights[remaining]
            cum = np.cumsum(w)
            u = rng.random() * cum[-1]
            pick = int(np.searchsorted(cum, u, side="right"))
            pick = min(pick, len(remaining) - 1)
            chosen.append(int(remaining[pick]))
            remaining = np.delete(remaining, pick)
        positive = {top_ids[i] for i in chosen}

    labels = {s.candidate_id: (1 if s.candidate_id in positive else 0) for s in scored}
    return LabeledDataset(
        cohort=cohort,
        labels=labels,
        scored=tuple(scored),
        top_subset_ids=top_ids,
        sampling_seed=seed,
    )
