"""Exception taxonomy shared across the engine.

Every CLI-visible failure maps to one of these; the CLI prints
``error: <category>: <message>`` and exits nonzero.
"""


class RevdictError(Exception):
    """Base class; ``category`` is the machine-parsable error tag."""

    category = "error"


class InvalidArgument(RevdictError):
    category = "invalid-argument"


class DimensionMismatch(RevdictError):
    category = "dimension-mismatch"


class InvalidState(RevdictError):
    category = "invalid-state"


class CorruptCheckpoint(RevdictError):
    category = "corrupt-checkpoint"

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ParseError(RevdictError):
    category = "parse-error"


class SchemaError(RevdictError):
    category = "schema-error"


class EmptyDataset(RevdictError):
    category = "empty-dataset"


class NumericError(RevdictError):
    category = "numeric-error"


class ConfigError(RevdictError):
    category = "config-error"


class DegenerateVector(RevdictError):
    category = "degenerate-vector"


class MissingGold(RevdictError):
    category = "missing-gold"
