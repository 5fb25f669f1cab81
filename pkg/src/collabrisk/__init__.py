"""Quantitative risk analysis of human/AI collaboration in process safety.

LOPA consequence ladders, fault trees, exact Bayesian-network inference and
interval (credal) bounds, plus the reference data of the separator case.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    EvaluationError,
    InconsistentEvidenceError,
    InsufficientSamplesError,
    ParameterLimitError,
    ParseError,
    RiskModelError,
    UnknownEntryError,
    ValidationError,
)
from .prob import (  # noqa: E402
    FailureRecord,
    FrequencyPerYear,
    ProbInterval,
    interval_complement,
    interval_product,
    rate_to_probability,
)

__all__ = [
    "EvaluationError",
    "FailureRecord",
    "FrequencyPerYear",
    "InconsistentEvidenceError",
    "InsufficientSamplesError",
    "ParameterLimitError",
    "ParseError",
    "ProbInterval",
    "RiskModelError",
    "UnknownEntryError",
    "ValidationError",
    "interval_complement",
    "interval_product",
    "rate_to_probability",
]
