"""Soft-margin linear SVM on the five trait scores.

Objective: J(w, b) = 0.5*||w||^2 + C * sum_i c_i * max(0, 1 - y_i*(w.x_i + b))
with y in {-1, +1} and per-sample costs c_i. With class balancing on,
c_i = 1 / (2 * n_class(i)) so each class carries total hinge mass 1/2;
otherwise c_i = 1/n. Either way the total mass is 1, which makes the
objective invariant under duplicating the training set.

The optimizer solves the dual with deterministic SMO (maximal violating
pair selection) and recovers the bias by exact minimization of the primal
in b given w (the hinge sum is piecewise linear in b). The recorded
objective trace is the best primal value achieved so far at each
checkpoint, and the returned model is that incumbent.
"""

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cohort import TRAITS, Cohort
from .errors import InvalidSpec, NonConvergenceWarning, SingleClassDataset

MODEL_SCHEMA = "hiresim.model/1"

_CHECKPOINT_EVERY = 64


@dataclass(frozen=True)
class TrainConfig:
    c: float = 1.0
    class_balance: bool = True
    tolerance: float = 1e-6
    max_iterations: int = 10000
    split_fraction: float = 0.8
    split_seed: int = 0

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InvalidSpec(f"C must be positive, got {self.c}")
        if not 0 < self.split_fraction < 1:
            raise InvalidSpec(f"split_fraction must be in (0, 1), got {self.split_fraction}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise InvalidSpec(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise InvalidSpec(f"max_iterations must be >= 1, got {self.max_iterations}")

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "class_balance": self.class_balance,
            "tolerance": self.tolerance,
            "max_iterations": self.max_iterations,
            "split_fraction": self.split_fraction,
        }


@dataclass(frozen=True)
class TrainingMetadata:
    iterations: int
    objective: float
    converged: bool
    objective_trace: tuple
    train_ids: tuple
    test_ids: tuple


@dataclass(frozen=True)
class LinearModel:
    """Trained hyperplane over the five traits (canonical trait order)."""

    feature_weights: dict
    bias: float
    metadata: TrainingMetadata

    def __post_init__(self):
        values = [self.feature_weights[t] for t in TRAITS] + [self.bias]
        if any(not math.isfinite(v) for v in values):
            raise ValueError(f"model values must be finite, got {values}")

    def as_array(self) -> np.ndarray:
        return np.array([self.feature_weights[t] for t in TRAITS])


@dataclass(frozen=True)
class Prediction:
    candidate_id: str
    decision_score: float
    predicted_label: int  # 1 iff decision_score > 0, strictly
    rank: int  # 1-based by descending decision_score, ties by ascending id


@dataclass(frozen=True)
class SvmFit:
    """Raw optimizer output (feature-space generic, used by train())."""

    w: np.ndarray
    b: float
    iterations: int
    objective: float
    objective_trace: tuple
    converged: bool
    kkt_gap: float


def per_sample_costs(y: np.ndarray, class_balance: bool) -> np.ndarray:
    """Hinge cost per sample; total mass 1 (per class 1/2 when balanced)."""
    n = len(y)
    if class_balance:
        n_pos = int(np.sum(y > 0))
        n_neg = n - n_pos
        costs = np.where(y > 0, 1.0 / (2 * n_pos), 1.0 / (2 * n_neg))
    else:
        costs = np.full(n, 1.0 / n)
    return costs


def primal_objective(w: np.ndarray, b: float, features: np.ndarray, y: np.ndarray,
                     costs: np.ndarray) -> float:
    margins = y * (features @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return float(0.5 * w @ w + costs @ hinge)


def optimal_bias(w: np.ndarray, features: np.ndarray, y: np.ndarray,
                 costs: np.ndarray) -> float:
    """Exact argmin over b of the hinge sum given w.

    The hinge sum is convex piecewise linear in b with breakpoints
    b_i = y_i - w.x_i; the subgradient is a step function that starts at
    -(total positive-class cost) and gains cost_i at each breakpoint.
    Returns the kink where the subgradient turns non-negative, or the
    midpoint of the flat optimal interval when it hits zero exactly.
    """
    margins = features @ w
    breakpoints = y - margins
    order = np.argsort(breakpoints, kind="stable")
    # zero-slope detection must absorb float accumulation noise (~n ulps),
    # while staying far below the smallest real slope step min(costs)
    tol = 1e-9 * float(costs.sum())
    slope = -float(costs[y > 0].sum())
    for idx, k in enumerate(order):
        slope += float(costs[k])
        if slope > tol:
            return float(breakpoints[k])
        if slope >= -tol:
            # flat optimal interval [this breakpoint, the next one]
            if idx + 1 < len(order):
                return float((breakpoints[k] + breakpoints[order[idx + 1]]) / 2.0)
            return float(breakpoints[k])
    return float(breakpoints[order[-1]])


def fit_linear_svm(features: np.ndarray, labels01: np.ndarray, c: float = 1.0,
                   class_balance: bool = True, tolerance: float = 1e-6,
                   max_iterations: int = 10000) -> SvmFit:
    """Deterministic SMO on the dual; works for any feature dimension.

    Terminates when the maximal KKT violating-pair gap drops to
    ``tolerance`` (bounding the attainable first-order objective
    improvement) or at ``max_iterations`` pair updates, whichever first.
    """
    features = np.asarray(features, dtype=float)
    labels01 = np.asarray(labels01)
    n = len(labels01)
    y = np.where(labels01 > 0, 1.0, -1.0)
    if np.all(y > 0) or np.all(y < 0):
        raise SingleClassDataset("training data must contain both classes")

    costs = per_sample_costs(y, class_balance)
    upper = c * costs  # per-sample box bound on alpha
    alpha = np.zeros(n)
    w = np.zeros(features.shape[1])

    best_j = math.inf
    best_w = w.copy()
    best_b = 0.0
    trace = []

    def checkpoint():
        nonlocal best_j, best_w, best_b
        w_exact = (alpha * y) @ features
        b_opt = optimal_bias(w_exact, features, y, upper)
        j = primal_objective(w_exact, b_opt, features, y, upper)
        if j < best_j:
            best_j, best_w, best_b = j, w_exact.copy(), b_opt
        trace.append(best_j)

    checkpoint()
    iterations = 0
    gap = math.inf
    pos = y > 0
    while iterations < max_iterations:
        grad_y = y - features @ w  # -y_i * dual gradient = implied bias per point
        at_upper = alpha >= upper
        at_zero = alpha <= 0.0
        i_up = (pos & ~at_upper) | (~pos & ~at_zero)
        i_low = (~pos & ~at_upper) | (pos & ~at_zero)
        up_vals = np.where(i_up, grad_y, -np.inf)
        low_vals = np.where(i_low, grad_y, np.inf)
        i = int(np.argmax(up_vals))
        j = int(np.argmin(low_vals))
        gap = float(up_vals[i] - low_vals[j])
        if gap <= tolerance:
            break

        diff = features[i] - features[j]
        eta = max(float(diff @ diff), 1e-12)
        delta = gap / eta
        # box limits along the equality-preserving direction
        limit_i = (upper[i] - alpha[i]) if y[i] > 0 else alpha[i]
        limit_j = alpha[j] if y[j] > 0 else (upper[j] - alpha[j])
        delta = min(delta, float(limit_i), float(limit_j))

        alpha[i] += y[i] * delta
        alpha[j] -= y[j] * delta
        for k in (i, j):
            snap = upper[k] * 1e-10
            if alpha[k] < snap:
                alpha[k] = 0.0
            elif alpha[k] > upper[k] - snap:
                alpha[k] = upper[k]
        w += delta * diff
        iterations += 1
        if iterations % _CHECKPOINT_EVERY == 0:
            checkpoint()

    checkpoint()
    converged = gap <= tolerance
    if not converged:
        warnings.warn(NonConvergenceWarning(
            f"SMO hit max_iterations={max_iterations} with KKT gap {gap:.3e}; "
            f"returning best objective {best_j:.6g}",
            objective=best_j, iterations=iterations,
        ))
    return SvmFit(w=best_w, b=float(best_b), iterations=iterations, objective=float(best_j),
                  objective_trace=tuple(trace), converged=converged, kkt_gap=float(gap))


def stratified_split(dataset, config: TrainConfig):
    """Deterministic per-class split; proportions preserved within one.

    Classes are processed label-0 then label-1 against a single PCG64
    stream seeded by split_seed; each class keeps at least one member in
    both halves whenever it has two or more.
    """
    by_class = {0: [], 1: []}
    for cid in sorted(dataset.labels):
        by_class[dataset.labels[cid]].append(cid)
    if not by_class[0] or not by_class[1]:
        raise SingleClassDataset(
            f"need both classes to split, got {len(by_class[1])} positives "
            f"and {len(by_class[0])} negatives"
        )
    rng = np.random.Generator(np.random.PCG64(config.split_seed))
    train, test = [], []
    for label in (0, 1):
        ids = by_class[label]
        n_class = len(ids)
        perm = rng.permutation(n_class)
        n_train = int(round(config.split_fraction * n_class))
        if n_class >= 2:
            n_train = min(max(n_train, 1), n_class - 1)
        else:
            n_train = 1
        shuffled = [ids[k] for k in perm]
        train.extend(shuffled[:n_train])
        test.extend(shuffled[n_train:])
    return tuple(sorted(train)), tuple(sorted(test))


def train(dataset, cohort: Cohort, config: TrainConfig | None = None) -> LinearModel:
    """Split, fit on the train half, and package the model with metadata."""
    config = config or TrainConfig()
    train_ids, test_ids = stratified_split(dataset, config)

    index = {cid: k for k, cid in enumerate(cohort.candidate_ids)}
    matrix = cohort.trait_matrix()
    features = np.array([matrix[index[cid]] for cid in train_ids])
    labels01 = np.array([dataset.labels[cid] for cid in train_ids])
    if labels01.min() == labels01.max():
        raise SingleClassDataset("train split contains a single class")

    fit = fit_linear_svm(features, labels01, c=config.c, class_balance=config.class_balance,
                         tolerance=config.tolerance, max_iterations=config.max_iterations)
    return LinearModel(
        feature_weights={t: float(fit.w[k]) for k, t in enumerate(TRAITS)},
        bias=float(fit.b),
        metadata=TrainingMetadata(
            iterations=fit.iterations,
            objective=fit.objective,
            converged=fit.converged,
            objective_trace=fit.objective_trace,
            train_ids=train_ids,
            test_ids=test_ids,
        ),
    )


def predict_all(model: LinearModel, cohort: Cohort):
    """Decision scores and 0/1 predictions for every candidate.

    A candidate exactly on the boundary (score 0) is predicted 0: selection
    requires strictly positive evidence.
    """
    scores = cohort.trait_matrix() @ model.as_array() + model.bias
    ids = cohort.candidate_ids
    order = sorted(range(len(ids)), key=lambda k: (-scores[k], ids[k]))
    rank_of = {idx: rank for rank, idx in enumerate(order, start=1)}
    return [
        Prediction(
            candidate_id=ids[k],
            decision_score=float(scores[k]),
            predicted_label=1 if scores[k] > 0 else 0,
            rank=rank_of[k],
        )
        for k in range(len(ids))
    ]


def model_to_dict(model: LinearModel) -> dict:
    return {
        "schema": MODEL_SCHEMA,
        "feature_weights": {t: model.feature_weights[t] for t in TRAITS},
        "bias": model.bias,
        "training": {
            "iterations": model.metadata.iterations,
            "objective": model.metadata.objective,
            "converged": model.metadata.converged,
            "train_ids": list(model.metadata.train_ids),
            "test_ids": list(model.metadata.test_ids),
        },
    }


def model_from_dict(data: dict) -> LinearModel:
    if data.get("schema") != MODEL_SCHEMA:
        raise InvalidSpec(f"unsupported model schema {data.get('schema')!r}")
    training = data["training"]
    return LinearModel(
        feature_weights={t: float(data["feature_weights"][t]) for t in TRAITS},
        bias=float(data["bias"]),
        metadata=TrainingMetadata(
            iterations=int(training["iterations"]),
            objective=float(training["objective"]),
            converged=bool(training["converged"]),
            objective_trace=(),
            train_ids=tuple(training["train_ids"]),
            test_ids=tuple(training["test_ids"]),
        ),
    )


def save_model(model: LinearModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path) -> LinearModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
