"""The published JSON Schema for the simulation report document.

Served by GET /api/schema/report and mirrored at docs/report_schema.json.
Field names are an API contract with UI clients; a rate of null is the
explicit undefined marker (0/0) and must be rendered as "n/a", never 0.
"""

from .cohort import DEMOGRAPHIC_ATTRIBUTES, TRAITS
from .metrics import REPORT_SCHEMA_VERSION

_NUMBER_OR_NULL = {"type": ["number", "null"]}

_WEIGHTS = {
    "type": "object",
    "properties": {t: {"type": "number"} for t in TRAITS},
    "required": list(TRAITS),
    "additionalProperties": False,
}

_CONFUSION = {
    "type": "object",
    "properties": {k: {"type": "integer", "minimum": 0} for k in ("tp", "fp", "fn", "tn")},
    "required": ["tp", "fp", "fn", "tn"],
    "additionalProperties": False,
}

_GROUP_METRICS_ROW = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "count": {"type": "integer", "minimum": 0},
        "selected": {"type": "integer", "minimum": 0},
        "selection_rate": _NUMBER_OR_NULL,
        "tpr": _NUMBER_OR_NULL,
        "fpr": _NUMBER_OR_NULL,
        "ppv": _NUMBER_OR_NULL,
        "npv": _NUMBER_OR_NULL,
        "confusion": _CONFUSION,
    },
    "required": ["group", "count", "selected", "selection_rate",
                 "tpr", "fpr", "ppv", "npv", "confusion"],
    "additionalProperties": False,
}

_SELECTION_ROW = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "count": {"type": "integer", "minimum": 0},
        "selected": {"type": "integer", "minimum": 0},
        "rate": _NUMBER_OR_NULL,
    },
    "required": ["group", "count", "selected", "rate"],
    "additionalProperties": False,
}

_LABEL_ROW = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "positive": {"type": "integer", "minimum": 0},
        "negative": {"type": "integer", "minimum": 0},
        "positive_share": _NUMBER_OR_NULL,
    },
    "required": ["group", "positive", "negative", "positive_share"],
    "additionalProperties": False,
}

_SCORE_ROW = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "count": {"type": "integer", "minimum": 0},
        "min": _NUMBER_OR_NULL,
        "q1": _NUMBER_OR_NULL,
        "median": _NUMBER_OR_NULL,
        "q3": _NUMBER_OR_NULL,
        "max": _NUMBER_OR_NULL,
    },
    "required": ["group", "count", "min", "q1", "median", "q3", "max"],
    "additionalProperties": False,
}


def _by_attribute(row_schema):
    return {
        "type": "object",
        "properties": {a: {"type": "array", "items": row_schema} for a in DEMOGRAPHIC_ATTRIBUTES},
        "required": list(DEMOGRAPHIC_ATTRIBUTES),
        "additionalProperties": False,
    }


_MODEL_SECTION = {
    "type": "object",
    "properties": {
        "feature_weights": _WEIGHTS,
        "bias": {"type": "number"},
        "training": {
            "type": "object",
            "properties": {
                "iterations": {"type": "integer", "minimum": 0},
                "objective": {"type": "number"},
                "converged": {"type": "boolean"},
                "train_size": {"type": "integer", "minimum": 0},
                "test_size": {"type": "integer", "minimum": 0},
                "train_positives": {"type": "integer", "minimum": 0},
                "test_positives": {"type": "integer", "minimum": 0},
            },
            "required": ["iterations", "objective", "converged", "train_size",
                         "test_size", "train_positives", "test_positives"],
        },
        "labeling": {
            "type": "object",
            "properties": {
                "top_subset_size": {"type": "integer", "minimum": 0},
                "positive_count": {"type": "integer", "minimum": 0},
                "sampling_seed": {"type": "integer"},
            },
            "required": ["top_subset_size", "positive_count", "sampling_seed"],
        },
        "evaluation": {
            "type": "object",
            "properties": {
                "basis": {"const": "test_split"},
                "accuracy": _NUMBER_OR_NULL,
                "confusion": _CONFUSION,
                "by_attribute": _by_attribute(_GROUP_METRICS_ROW),
            },
            "required": ["basis", "accuracy", "confusion", "by_attribute"],
        },
        "selection": {
            "type": "object",
            "properties": {
                "basis": {"const": "full_cohort"},
                "overall": {
                    "type": "object",
                    "properties": {
                        "count": {"type": "integer", "minimum": 0},
                        "selected": {"type": "integer", "minimum": 0},
                        "rate": _NUMBER_OR_NULL,
                    },
                    "required": ["count", "selected", "rate"],
                },
                "by_attribute": _by_attribute(_SELECTION_ROW),
            },
            "required": ["basis", "overall", "by_attribute"],
        },
        "label_distribution": {
            "type": "object",
            "properties": {
                "basis": {"const": "full_cohort"},
                "overall": {
                    "type": "object",
                    "properties": {
                        "positive": {"type": "integer", "minimum": 0},
                        "negative": {"type": "integer", "minimum": 0},
                        "positive_share": _NUMBER_OR_NULL,
                    },
                    "required": ["positive", "negative", "positive_share"],
                },
                "by_attribute": _by_attribute(_LABEL_ROW),
            },
            "required": ["basis", "overall", "by_attribute"],
        },
        "score_distribution": {
            "type": "object",
            "properties": {
                "basis": {"const": "full_cohort"},
                "by_attribute": _by_attribute(_SCORE_ROW),
            },
            "required": ["basis", "by_attribute"],
        },
        "predictions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "candidate_id": {"type": "string"},
                    "composite_score": {"type": "number"},
                    "composite_rank": {"type": "integer", "minimum": 1},
                    "label": {"enum": [0, 1]},
                    "decision_score": {"type": "number"},
                    "predicted_label": {"enum": [0, 1]},
                    "rank": {"type": "integer", "minimum": 1},
                },
                "required": ["candidate_id", "composite_score", "composite_rank",
                             "label", "decision_score", "predicted_label", "rank"],
            },
        },
    },
    "required": ["feature_weights", "bias", "training", "labeling", "evaluation",
                 "selection", "label_distribution", "score_distribution", "predictions"],
}

_DELTA_ROW = {
    "type": "object",
    "properties": {"group": {"type": "string"}, "delta": _NUMBER_OR_NULL},
    "required": ["group", "delta"],
    "additionalProperties": False,
}

_FAIRNESS_DELTA_ROW = {
    "type": "object",
    "properties": {
        "group": {"type": "string"},
        "tpr": _NUMBER_OR_NULL,
        "fpr": _NUMBER_OR_NULL,
        "ppv": _NUMBER_OR_NULL,
        "npv": _NUMBER_OR_NULL,
        "selection_rate": _NUMBER_OR_NULL,
    },
    "required": ["group", "tpr", "fpr", "ppv", "npv", "selection_rate"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "hiresim/report_schema.json",
    "title": "hiresim simulation report",
    "type": "object",
    "properties": {
        "schema_version": {"const": REPORT_SCHEMA_VERSION},
        "kind": {"const": "simulation_report"},
        "config": {
            "type": "object",
            "properties": {
                "cohort": {
                    "type": "object",
                    "properties": {
                        "kind": {"enum": ["file", "synthetic"]},
                        "source": {"type": "string"},
                        "seed": {"type": ["integer", "null"]},
                        "size": {"type": "integer", "minimum": 2},
                    },
                    "required": ["kind", "source", "seed", "size"],
                },
                "weights_a": _WEIGHTS,
                "weights_b": _WEIGHTS,
                "master_seed": {"type": "integer"},
                "derived_seeds": {
                    "type": "object",
                    "properties": {k: {"type": "integer"} for k in ("label_a", "label_b", "split")},
                    "required": ["label_a", "label_b", "split"],
                },
                "policy": {
                    "type": "object",
                    "properties": {
                        "percentile_cut": {"type": "number"},
                        "positive_count": {"type": "integer"},
                        "weight_high": {"type": "number"},
                        "weight_low": {"type": "number"},
                        "weight_span": {"type": "number"},
                    },
                    "required": ["percentile_cut", "positive_count",
                                 "weight_high", "weight_low", "weight_span"],
                },
                "train": {
                    "type": "object",
                    "properties": {
                        "c": {"type": "number"},
                        "class_balance": {"type": "boolean"},
                        "tolerance": {"type": "number"},
                        "max_iterations": {"type": "integer"},
                        "split_fraction": {"type": "number"},
                    },
                    "required": ["c", "class_balance", "tolerance",
                                 "max_iterations", "split_fraction"],
                },
            },
            "required": ["cohort", "weights_a", "weights_b", "master_seed",
                         "derived_seeds", "policy", "train"],
        },
        "models": {
            "type": "object",
            "properties": {"a": _MODEL_SECTION, "b": _MODEL_SECTION},
            "required": ["a", "b"],
            "additionalProperties": False,
        },
        "deltas": {
            "type": "object",
            "properties": {
                "accuracy": _NUMBER_OR_NULL,
                "selection_rate_overall": _NUMBER_OR_NULL,
                "selection_rates": _by_attribute(_DELTA_ROW),
                "fairness": _by_attribute(_FAIRNESS_DELTA_ROW),
                "label_positive_share": _by_attribute(_DELTA_ROW),
                "score_median": _by_attribute(_DELTA_ROW),
                "rank_table": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "candidate_id": {"type": "string"},
                            "rank_a": {"type": "integer", "minimum": 1},
                            "rank_b": {"type": "integer", "minimum": 1},
                            "rank_delta": {"type": "integer"},
                            "decision_score_a": {"type": "number"},
                            "decision_score_b": {"type": "number"},
                        },
                        "required": ["candidate_id", "rank_a", "rank_b", "rank_delta",
                                     "decision_score_a", "decision_score_b"],
                    },
                },
            },
            "required": ["accuracy", "selection_rate_overall", "selection_rates",
                         "fairness", "label_positive_share", "score_median", "rank_table"],
        },
    },
    "required": ["schema_version", "kind", "config", "models", "deltas"],
}
