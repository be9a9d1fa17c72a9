"""Exception types shared across the package."""


class MaosrError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(MaosrError, ValueError):
    """A correlation configuration or experiment config is internally inconsistent."""


class SplitValidationError(MaosrError, ValueError):
    """A split plan, combination list or domain set violates its invariants."""


class UnknownLabelError(MaosrError, ValueError):
    """A label does not belong to the known or unknown value set of its attribute."""


class GenerationError(MaosrError, RuntimeError):
    """Dataset synthesis cannot satisfy the request (e.g. source pool exhausted)."""


class IngestionError(MaosrError, RuntimeError):
    """An external asset index cannot be turned into a valid dataset."""


class TrainingError(MaosrError, RuntimeError):
    """Training preconditions violated or the loss became non-finite."""


class ScoringError(MaosrError, ValueError):
    """Invalid input to a confidence scorer (NaN/Inf or empty logits)."""


class FitError(MaosrError, RuntimeError):
    """Calibration model fitting failed (too few samples, degenerate spread)."""


class MetricError(MaosrError, ValueError):
    """A metric kernel received an empty or structurally invalid population."""


class AggregationError(MaosrError, ValueError):
    """Reports with mismatched configuration fingerprints cannot be aggregated."""


class HarnessError(MaosrError, RuntimeError):
    """A pipeline stage failed; carries the stage name for CLI exit reporting."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
