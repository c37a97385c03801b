"""End-to-end session orchestration: cohort + two weight vectors + one seed
in, two labeled datasets, two models, and one comparison report out.

Seed derivation (fixed, published): 63-bit integers from SHA-256 over
``"<master_seed>|label|<canonical weight vector>"`` for each labeling
stream and ``"<master_seed>|split"`` for the shared train/test split.
Deriving the labeling seed from the weight vector (rather than an A/B tag)
makes equal definitions reproduce identical pipelines, so an A-vs-A
comparison is exactly zero everywhere.
"""

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .cohort import (
    Cohort,
    SyntheticCohortSpec,
    generate_synthetic_cohort,
    load_cohort,
)
from .errors import HireSimError, PipelineError
from .metrics import REPORT_SCHEMA_VERSION, ModelBundle, build_model_bundle, compare
from .svm import LinearModel, TrainConfig, predict_all, train
from .targets import LabeledDataset, LabelingPolicy, WeightVector, assign_labels, composite_scores


@dataclass(frozen=True)
class SessionConfig:
    cohort: Cohort
    weights_a: WeightVector
    weights_b: WeightVector
    policy: LabelingPolicy = LabelingPolicy()
    train: TrainConfig = TrainConfig()
    master_seed: int = 0


@dataclass(frozen=True)
class PipelineOutput:
    tag: str
    dataset: LabeledDataset
    model: LinearModel
    bundle: ModelBundle


@dataclass(frozen=True)
class SimulationResult:
    config: SessionConfig
    dataset_a: LabeledDataset
    dataset_b: LabeledDataset
    model_a: LinearModel
    model_b: LinearModel
    report: object  # ComparisonReport
    timing: dict  # wall-clock metadata; never serialized into the document


def derive_seed(master_seed: int, *parts: str) -> int:
    """63-bit non-negative integer from SHA-256 of the joined parts."""
    payload = "|".join([str(int(master_seed)), *parts]).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def derived_seeds(config: SessionConfig) -> dict:
    return {
        "label_a": derive_seed(config.master_seed, "label", config.weights_a.canonical_key()),
        "label_b": derive_seed(config.master_seed, "label", config.weights_b.canonical_key()),
        "split": derive_seed(config.master_seed, "split"),
    }


def _noop_progress(stage: str) -> None:
    return None


def _run_pipeline(tag: str, config: SessionConfig, label_seed: int, split_seed: int,
                  progress) -> PipelineOutput:
    train_config = replace(config.train, split_seed=split_seed)
    stage = f"scoring_{tag}"
    try:
        progress(stage)
        scored = composite_scores(config.cohort, getattr(config, f"weights_{tag}"))
        stage = f"labeling_{tag}"
        progress(stage)
        dataset = assign_labels(scored, config.policy, label_seed, cohort=config.cohort)
        stage = f"training_{tag}"
        progress(stage)
        model = train(dataset, config.cohort, train_config)
        stage = f"predicting_{tag}"
        progress(stage)
        predictions = predict_all(model, config.cohort)
        stage = f"metrics_{tag}"
        progress(stage)
        bundle = build_model_bundle(config.cohort, dataset, model, predictions,
                                    model.metadata.test_ids)
    except HireSimError as exc:
        if isinstance(exc, PipelineError):
            raise
        raise PipelineError(stage, tag, exc) from exc
    return PipelineOutput(tag=tag, dataset=dataset, model=model, bundle=bundle)


def run_simulation(config: SessionConfig, parallel: bool = False,
                   progress=None) -> SimulationResult:
    """Run both pipelines and compare them.

    ``parallel`` runs A and B on two threads; both pipelines are pure
    functions of (config, derived seeds) so the result is identical either
    way.
    """
    progress = progress or _noop_progress
    seeds = derived_seeds(config)
    started = time.perf_counter()

    if parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            future_a = pool.submit(_run_pipeline, "a", config, seeds["label_a"],
                                   seeds["split"], _noop_progress)
            future_b = pool.submit(_run_pipeline, "b", config, seeds["label_b"],
                                   seeds["split"], _noop_progress)
            out_a = future_a.result()
            out_b = future_b.result()
    else:
        out_a = _run_pipeline("a", config, seeds["label_a"], seeds["split"], progress)
        out_b = _run_pipeline("b", config, seeds["label_b"], seeds["split"], progress)

    progress("comparing")
    report = compare(out_a.bundle, out_b.bundle)
    timing = {"total_seconds": time.perf_counter() - started}
    return SimulationResult(
        config=config,
        dataset_a=out_a.dataset, dataset_b=out_b.dataset,
        model_a=out_a.model, model_b=out_b.model,
        report=report, timing=timing,
    )


def config_echo(config: SessionConfig) -> dict:
    prov = config.cohort.provenance
    return {
        "cohort": {**prov.to_dict(), "size": len(config.cohort)},
        "weights_a": config.weights_a.to_dict(),
        "weights_b": config.weights_b.to_dict(),
        "master_seed": config.master_seed,
        "derived_seeds": derived_seeds(config),
        "policy": config.policy.to_dict(),
        "train": config.train.to_dict(),
    }


def result_document(result: SimulationResult) -> dict:
    """The versioned report document: config echo + model sections + deltas.

    Timing is deliberately absent so identical configs serialize to
    identical bytes.
    """
    report_dict = result.report.to_dict()
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "simulation_report",
        "config": config_echo(result.config),
        "models": report_dict["models"],
        "deltas": report_dict["deltas"],
    }


def render_document(document: dict) -> str:
    """Canonical serialization; allow_nan=False guarantees no NaN escapes."""
    return json.dumps(document, indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def cohort_from_echo(cohort_echo: dict) -> Cohort:
    """Rebuild the cohort a document's config echo describes."""
    if cohort_echo["kind"] == "synthetic":
        spec = SyntheticCohortSpec.from_json(cohort_echo["source"])
        return generate_synthetic_cohort(spec, cohort_echo["seed"])
    return load_cohort(cohort_echo["source"])


def config_from_document(document: dict) -> SessionConfig:
    """Reconstruct a SessionConfig from a document's config echo.

    Re-running the returned config reproduces the document bit for bit.
    """
    echo = document["config"]
    policy_fields = {k: v for k, v in echo["policy"].items() if k != "weight_span"}
    return SessionConfig(
        cohort=cohort_from_echo(echo["cohort"]),
        weights_a=WeightVector.from_mapping(echo["weights_a"]),
        weights_b=WeightVector.from_mapping(echo["weights_b"]),
        policy=LabelingPolicy(**policy_fields),
        train=TrainConfig(**echo["train"]),
        master_seed=echo["master_seed"],
    )
