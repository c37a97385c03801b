"""Confusion matrices, per-group fairness metrics, distribution summaries,
and the two-model comparison report.

Rates with an empty denominator (0/0) are represented as None — the
explicit undefined marker — never coerced to 0 and never NaN. Fairness
metrics are computed over the held-out test split; selection rates, label
distributions, and score distributions over the full cohort. Every section
labels its basis.
"""

from dataclasses import dataclass

import numpy as np

from .cohort import DEMOGRAPHIC_ATTRIBUTES, Cohort
from .errors import CohortMismatch, MissingId, UnknownAttribute

REPORT_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def accuracy(self) -> float | None:
        return (self.tp + self.tn) / self.total if self.total else None

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp,
                               self.fn + other.fn, self.tn + other.tn)

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


@dataclass(frozen=True)
class GroupMetrics:
    attribute: str
    group: str
    count: int
    selected: int
    selection_rate: float | None
    tpr: float | None
    fpr: float | None
    ppv: float | None
    npv: float | None
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "count": self.count,
            "selected": self.selected,
            "selection_rate": self.selection_rate,
            "tpr": self.tpr,
            "fpr": self.fpr,
            "ppv": self.ppv,
            "npv": self.npv,
            "confusion": self.confusion.to_dict(),
        }


def _rate(num: int, den: int) -> float | None:
    return num / den if den else None


def _prediction_map(predictions) -> dict:
    if isinstance(predictions, dict):
        return predictions
    return {p.candidate_id: p.predicted_label for p in predictions}


def confusion(predictions, labels, over) -> ConfusionMatrix:
    """Exact counts of tp/fp/fn/tn over the given id set."""
    preds = _prediction_map(predictions)
    tp = fp = fn = tn = 0
    for cid in sorted(over):
        if cid not in preds or cid not in labels:
            raise MissingId(f"candidate {cid!r} lacks a prediction or a label")
        predicted, actual = preds[cid], labels[cid]
        if predicted == 1 and actual == 1:
            tp += 1
        elif predicted == 1 and actual == 0:
            fp += 1
        elif predicted == 0 and actual == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def _check_attribute(attribute: str) -> None:
    if attribute not in DEMOGRAPHIC_ATTRIBUTES:
        raise UnknownAttribute(
            f"attribute must be one of {DEMOGRAPHIC_ATTRIBUTES}, got {attribute!r}"
        )


def group_metrics(predictions, labels, cohort: Cohort, attribute: str, over=None):
    """Per-group confusion, TPR/FPR/PPV/NPV, and selection rate.

    Every group value present in the cohort is reported, even when the
    evaluated id set has no members of it (count 0, undefined rates), so
    A/B group lists always align.
    """
    _check_attribute(attribute)
    preds = _prediction_map(predictions)
    over = sorted(over) if over is not None else sorted(labels)
    group_of = cohort.group_of(attribute)
    members = {value: [] for value in cohort.group_values(attribute)}
    for cid in over:
        if cid not in preds or cid not in labels:
            raise MissingId(f"candidate {cid!r} lacks a prediction or a label")
        members[group_of[cid]].append(cid)

    result = []
    for value in cohort.group_values(attribute):
        ids = members[value]
        cm = confusion(preds, labels, ids)
        selected = cm.tp + cm.fp
        result.append(GroupMetrics(
            attribute=attribute,
            group=value,
            count=len(ids),
            selected=selected,
            selection_rate=_rate(selected, len(ids)),
            tpr=_rate(cm.tp, cm.tp + cm.fn),
            fpr=_rate(cm.fp, cm.fp + cm.tn),
            ppv=_rate(cm.tp, cm.tp + cm.fp),
            npv=_rate(cm.tn, cm.tn + cm.fn),
            confusion=cm,
        ))
    return result


def group_selection(predictions, cohort: Cohort, attribute: str):
    """Selection (positive prediction) counts and rates per group."""
    _check_attribute(attribute)
    preds = _prediction_map(predictions)
    group_of = cohort.group_of(attribute)
    counts = {value: [0, 0] for value in cohort.group_values(attribute)}
    for cid, predicted in preds.items():
        entry = counts[group_of[cid]]
        entry[0] += 1
        entry[1] += predicted
    return [
        {"group": value, "count": counts[value][0], "selected": counts[value][1],
         "rate": _rate(counts[value][1], counts[value][0])}
        for value in cohort.group_values(attribute)
    ]


def overall_selection(predictions) -> dict:
    preds = _prediction_map(predictions)
    selected = sum(preds.values())
    return {"count": len(preds), "selected": selected, "rate": _rate(selected, len(preds))}


def label_distribution(labels, cohort: Cohort, attribute: str):
    """Training-label counts per group; shares of each group labeled 1."""
    _check_attribute(attribute)
    group_of = cohort.group_of(attribute)
    counts = {value: [0, 0] for value in cohort.group_values(attribute)}
    for cid, label in labels.items():
        entry = counts[group_of[cid]]
        entry[label] += 1
    return [
        {"group": value, "positive": counts[value][1], "negative": counts[value][0],
         "positive_share": _rate(counts[value][1], counts[value][0] + counts[value][1])}
        for value in cohort.group_values(attribute)
    ]


def score_distribution(scored, cohort: Cohort, attribute: str):
    """Five-number summary of composite scores per group.

    Median and quartiles use linear (midpoint for the median) interpolation.
    Groups with no scored members carry None summaries.
    """
    _check_attribute(attribute)
    group_of = cohort.group_of(attribute)
    values = {value: [] for value in cohort.group_values(attribute)}
    for item in scored:
        values[group_of[item.candidate_id]].append(item.composite_score)

    result = []
    for value in cohort.group_values(attribute):
        scores = values[value]
        if not scores:
            result.append({"group": value, "count": 0, "min": None, "q1": None,
                           "median": None, "q3": None, "max": None})
            continue
        arr = np.array(scores)
        result.append({
            "group": value,
            "count": len(scores),
            "min": float(arr.min()),
            "q1": float(np.percentile(arr, 25, method="linear")),
            "median": float(np.median(arr)),
            "q3": float(np.percentile(arr, 75, method="linear")),
            "max": float(arr.max()),
        })
    return result


@dataclass(frozen=True)
class ModelBundle:
    """Everything the comparison needs about one trained model."""

    cohort: Cohort
    dataset: object  # LabeledDataset
    model: object  # LinearModel
    predictions: tuple
    test_ids: tuple
    section: dict


def build_model_bundle(cohort: Cohort, dataset, model, predictions, test_ids) -> ModelBundle:
    """Compute the full per-model report section."""
    preds = tuple(predictions)
    pred_map = {p.candidate_id: p.predicted_label for p in preds}
    test_cm = confusion(pred_map, dataset.labels, test_ids)

    scored_by_id = {s.candidate_id: s for s in dataset.scored}
    train_ids = model.metadata.train_ids
    section = {
        "feature_weights": dict(model.feature_weights),
        "bias": model.bias,
        "training": {
            "iterations": model.metadata.iterations,
            "objective": model.metadata.objective,
            "converged": model.metadata.converged,
            "train_size": len(train_ids),
            "test_size": len(test_ids),
            "train_positives": sum(dataset.labels[c] for c in train_ids),
            "test_positives": sum(dataset.labels[c] for c in test_ids),
        },
        "labeling": {
            "top_subset_size": len(dataset.top_subset_ids),
            "positive_count": sum(dataset.labels.values()),
            "sampling_seed": dataset.sampling_seed,
        },
        "evaluation": {
            "basis": "test_split",
            "accuracy": test_cm.accuracy(),
            "confusion": test_cm.to_dict(),
            "by_attribute": {
                attr: [g.to_dict() for g in group_metrics(pred_map, dataset.labels, cohort, attr, over=test_ids)]
                for attr in DEMOGRAPHIC_ATTRIBUTES
            },
        },
        "selection": {
            "basis": "full_cohort",
            "overall": overall_selection(pred_map),
            "by_attribute": {attr: group_selection(pred_map, cohort, attr)
                             for attr in DEMOGRAPHIC_ATTRIBUTES},
        },
        "label_distribution": {
            "basis": "full_cohort",
            "overall": {
                "positive": sum(dataset.labels.values()),
                "negative": len(dataset.labels) - sum(dataset.labels.values()),
                "positive_share": _rate(sum(dataset.labels.values()), len(dataset.labels)),
            },
            "by_attribute": {attr: label_distribution(dataset.labels, cohort, attr)
                             for attr in DEMOGRAPHIC_ATTRIBUTES},
        },
        "score_distribution": {
            "basis": "full_cohort",
            "by_attribute": {attr: score_distribution(dataset.scored, cohort, attr)
                             for attr in DEMOGRAPHIC_ATTRIBUTES},
        },
        "predictions": [
            {
                "candidate_id": p.candidate_id,
                "composite_score": scored_by_id[p.candidate_id].composite_score,
                "composite_rank": scored_by_id[p.candidate_id].rank,
                "label": dataset.labels[p.candidate_id],
                "decision_score": p.decision_score,
                "predicted_label": p.predicted_label,
                "rank": p.rank,
            }
            for p in sorted(preds, key=lambda p: p.candidate_id)
        ],
    }
    return ModelBundle(cohort=cohort, dataset=dataset, model=model,
                       predictions=preds, test_ids=tuple(test_ids), section=section)


@dataclass(frozen=True)
class ComparisonReport:
    models: dict  # {"a": section, "b": section}
    deltas: dict

    def to_dict(self) -> dict:
        return {"models": self.models, "deltas": self.deltas}


def _delta(b, a):
    if a is None or b is None:
        return None
    return b - a


def _group_deltas(rows_a, rows_b, fields):
    out = []
    for row_a, row_b in zip(rows_a, rows_b):
        entry = {"group": row_a["group"]}
        for name, key in fields.items():
            entry[name] = _delta(row_b[key], row_a[key])
        out.append(entry)
    return out


def compare(bundle_a: ModelBundle, bundle_b: ModelBundle) -> ComparisonReport:
    """Side-by-side sections plus per-metric deltas, all oriented B minus A."""
    if bundle_a.cohort is not bundle_b.cohort and (
        bundle_a.cohort.provenance != bundle_b.cohort.provenance
        or len(bundle_a.cohort) != len(bundle_b.cohort)
    ):
        raise CohortMismatch("bundles were computed over different cohorts")

    a, b = bundle_a.section, bundle_b.section
    deltas = {
        "accuracy": _delta(b["evaluation"]["accuracy"], a["evaluation"]["accuracy"]),
        "selection_rate_overall": _delta(b["selection"]["overall"]["rate"],
                                         a["selection"]["overall"]["rate"]),
        "selection_rates": {
            attr: _group_deltas(a["selection"]["by_attribute"][attr],
                                b["selection"]["by_attribute"][attr], {"delta": "rate"})
            for attr in DEMOGRAPHIC_ATTRIBUTES
        },
        "fairness": {
            attr: _group_deltas(a["evaluation"]["by_attribute"][attr],
                                b["evaluation"]["by_attribute"][attr],
                                {"tpr": "tpr", "fpr": "fpr", "ppv": "ppv", "npv": "npv",
                                 "selection_rate": "selection_rate"})
            for attr in DEMOGRAPHIC_ATTRIBUTES
        },
        "label_positive_share": {
            attr: _group_deltas(a["label_distribution"]["by_attribute"][attr],
                                b["label_distribution"]["by_attribute"][attr],
                                {"delta": "positive_share"})
            for attr in DEMOGRAPHIC_ATTRIBUTES
        },
        "score_median": {
            attr: _group_deltas(a["score_distribution"]["by_attribute"][attr],
                                b["score_distribution"]["by_attribute"][attr],
                                {"delta": "median"})
            for attr in DEMOGRAPHIC_ATTRIBUTES
        },
        "rank_table": [
            {
                "candidate_id": pa["candidate_id"],
                "rank_a": pa["rank"],
                "rank_b": pb["rank"],
                "rank_delta": pb["rank"] - pa["rank"],
                "decision_score_a": pa["decision_score"],
                "decision_score_b": pb["decision_score"],
            }
            for pa, pb in zip(a["predictions"], b["predictions"])
        ],
    }
    return ComparisonReport(models={"a": a, "b": b}, deltas=deltas)
