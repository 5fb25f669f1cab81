"""Exception hierarchy shared by every collabrisk module."""


class RiskModelError(Exception):
    """Base class for all errors raised by collabrisk."""


class ValidationError(RiskModelError, ValueError):
    """A value or structure violates a model invariant."""


class UnknownEntryError(RiskModelError, KeyError):
    """A node, catalog entry, or IPL kind could not be found."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class EvaluationError(RiskModelError):
    """A model cannot be evaluated as requested (e.g. unresolved basic event)."""


class InconsistentEvidenceError(RiskModelError):
    """The supplied evidence has zero probability under the model."""


class InsufficientSamplesError(RiskModelError):
    """A Monte Carlo estimate could not be formed (e.g. every sample rejected)."""


class ParameterLimitError(RiskModelError):
    """Corner enumeration would exceed the configured parameter limit."""

    def __init__(self, count: int, limit: int):
        super().__init__(
            f"{count} free interval parameters exceed the enumeration limit of {limit}"
        )
        self.count = count
        self.limit = limit


class ParseError(ValidationError):
    """A model document could not be parsed.

    ``position`` is either ``"line L, column C"`` for syntax errors or a
    JSON path such as ``$.network.nodes[2].cpt[1]`` for semantic errors.
    """

    def __init__(self, message: str, position: str):
        super().__init__(f"{position}: {message}")
        self.message = message
        self.position = position
