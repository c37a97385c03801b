"""Exception types shared across the package.

Every error carries a stable ``code`` string so the CLI can map it to an
exit code and the HTTP service can put it in a structured payload.
"""


class HireSimError(Exception):
    """Base class for all package errors."""

    code = "error"

    def payload(self) -> dict:
        """Structured form used by the service and the CLI stderr output."""
        return {"code": self.code, "message": str(self)}


# --- cohort ingestion -------------------------------------------------------

class CohortError(HireSimError):
    code = "cohort_error"


class MissingColumn(CohortError):
    code = "missing_column"

    def __init__(self, columns):
        self.columns = tuple(columns)
        super().__init__(f"cohort file is missing required column(s): {', '.join(self.columns)}")

    def payload(self) -> dict:
        return {**super().payload(), "columns": list(self.columns)}


class InvalidCohortFile(CohortError):
    """Header present but malformed (extra or reordered columns, bad row shape)."""

    code = "invalid_cohort_file"


class NonFiniteScore(CohortError):
    code = "non_finite_score"

    def __init__(self, candidate_id, test):
        self.candidate_id = candidate_id
        self.test = test
        super().__init__(f"candidate {candidate_id!r} has a non-finite or unparseable score for test {test!r}")


class DuplicateCandidateId(CohortError):
    code = "duplicate_candidate_id"

    def __init__(self, candidate_id):
        self.candidate_id = candidate_id
        super().__init__(f"duplicate candidate_id {candidate_id!r}")


class EmptyCohort(CohortError):
    code = "empty_cohort"


class InvalidSpec(HireSimError):
    """Bad synthetic-cohort spec, labeling policy, or train config values."""

    code = "invalid_spec"


# --- target definition ------------------------------------------------------

class ZeroWeightVector(HireSimError):
    code = "invalid_weights"


class DomainError(HireSimError):
    """Sampling-weight rank/size out of range."""

    code = "domain_error"


# --- model training ---------------------------------------------------------

class SingleClassDataset(HireSimError):
    code = "single_class_dataset"


class NonConvergenceWarning(UserWarning):
    """Optimizer hit max_iterations; the model is still returned."""

    def __init__(self, message, objective, iterations):
        super().__init__(message)
        self.objective = objective
        self.iterations = iterations


class DegenerateTestWarning(UserWarning):
    """A test column had zero range across the cohort; scores set to 0.5."""


# --- metrics ----------------------------------------------------------------

class MissingId(HireSimError):
    code = "missing_id"


class UnknownAttribute(HireSimError):
    code = "unknown_attribute"


class CohortMismatch(HireSimError):
    code = "cohort_mismatch"


# --- engine / service -------------------------------------------------------

class PipelineError(HireSimError):
    """Wraps a module error with the pipeline stage where it happened."""

    code = "pipeline_error"

    def __init__(self, stage, model_tag, cause):
        self.stage = stage
        self.model_tag = model_tag
        self.cause = cause
        super().__init__(f"pipeline stage {stage!r} (model {model_tag}) failed: {cause}")

    def payload(self) -> dict:
        inner = (
            self.cause.payload() if isinstance(self.cause, HireSimError)
            else {"code": "internal", "message": str(self.cause)}
        )
        return {"code": self.code, "message": str(self), "stage": self.stage,
                "model": self.model_tag, "cause": inner}


class UnknownSession(HireSimError):
    code = "unknown_session"


class SessionConflict(HireSimError):
    code = "conflict"


class PortInUse(HireSimError):
    code = "port_in_use"
