"""Exception types shared across the package."""


class LogSampleError(Exception):
    """Base class for all errors raised by this package."""


class MissingMandatoryField(LogSampleError):
    """An event record lacks case id, activity, or start time."""


class EmptyLog(LogSampleError):
    """An operation received or produced a log with no events."""


class ParseError(LogSampleError):
    """A file could not be parsed; carries the offending position."""

    def __init__(self, position: str, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"{position}: {reason}")


class MappingError(LogSampleError):
    """A declared CSV column is missing or duplicated."""


class IoError(LogSampleError):
    """A file could not be written or read at the OS level."""


class UnknownAttribute(LogSampleError):
    """An attribute name is not declared in the log's schema."""


class WrongAttributeKind(LogSampleError):
    """An attribute has the wrong kind for the requested operation."""


class EmptySample(LogSampleError):
    """Sampling selected zero cases (all quotas were zero)."""


class TooFewCases(LogSampleError):
    """The log has fewer cases than the requested fold count."""


class EmptyInput(LogSampleError):
    """A metric was asked for on an empty prediction or error list."""


class MissingOutcomeLabel(LogSampleError):
    """A case lacks the attribute the outcome predicate needs."""


class TaskMismatch(LogSampleError):
    """A model was given a feature table built for a different task."""


class SchemaMismatch(LogSampleError):
    """A feature row does not match the model's feature schema."""


class ZeroDenominator(LogSampleError):
    """A relative metric's denominator is zero; names the field."""

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"denominator is zero: {field}")
