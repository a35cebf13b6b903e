"""Exception hierarchy for the evaluation engine."""


class IdsEvalError(Exception):
    """Base class for all engine errors."""


class BundleParseError(IdsEvalError):
    """Raised when a knowledge bundle cannot be parsed.

    ``offset`` carries the byte offset of the syntax error when known.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class IngestError(IdsEvalError):
    """Raised when parsed input violates an ingestion contract (e.g. duplicate ids)."""


class SchemaError(IdsEvalError):
    """Raised when a structured input does not match its expected schema."""


class DomainError(IdsEvalError):
    """Raised when a value is outside the mathematical domain of an operation."""


class ProfilingError(IdsEvalError):
    """Raised when a dataset cannot be profiled (e.g. no attack rows)."""


class UnknownLabelError(IdsEvalError):
    """Raised when an attack label is not present in a dataset profile."""


class MissingKeyError(IdsEvalError):
    """Raised when required embedding keys are absent from a vector store."""

    def __init__(self, keys):
        self.keys = list(keys)
        super().__init__("missing vector keys: " + ", ".join(self.keys))


class ConfigError(IdsEvalError):
    """Raised for configuration or I/O problems (maps to exit code 2)."""
