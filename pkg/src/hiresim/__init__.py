"""hiresim: simulate how the definition of a "good employee" changes who a
hiring model selects and how fairness metrics shift across groups.

Pipeline: trait-weighted composite scoring -> percentile cut + weighted
sampling of positives -> linear SVM per target definition -> two-model
fairness comparison. Exposed as a library, CLI, and HTTP service.
"""

from .cohort import (
    COHORT_HEADER,
    DEMOGRAPHIC_ATTRIBUTES,
    TEST_NAMES,
    TRAIT_TESTS,
    TRAITS,
    CandidateRecord,
    Cohort,
    DirectionConfig,
    Provenance,
    SyntheticCohortSpec,
    TraitProfile,
    cohort_from_csv_text,
    default_synthetic_spec,
    generate_synthetic_cohort,
    load_cohort,
    normalize_and_aggregate,
    write_cohort_csv,
)
from .engine import (
    SessionConfig,
    SimulationResult,
    config_from_document,
    derive_seed,
    derived_seeds,
    render_document,
    result_document,
    run_simulation,
)
from .metrics import (
    ComparisonReport,
    ConfusionMatrix,
    GroupMetrics,
    build_model_bundle,
    compare,
    confusion,
    group_metrics,
    group_selection,
    label_distribution,
    overall_selection,
    score_distribution,
)
from .svm import (
    LinearModel,
    Prediction,
    TrainConfig,
    fit_linear_svm,
    load_model,
    predict_all,
    save_model,
    stratified_split,
    train,
)
from .targets import (
    LabeledDataset,
    LabelingPolicy,
    ScoredCandidate,
    WeightVector,
    assign_labels,
    composite_scores,
    sampling_weight,
)

__version__ = "0.1.0"
