"""Exception types shared across the package."""


class PairselectError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(PairselectError):
    """Invalid or inconsistent configuration."""


class ParseError(PairselectError):
    """Malformed input that could not be parsed."""


class ValidationError(PairselectError):
    """Parsed data violating a documented invariant."""


class TrainingError(PairselectError):
    """A model could not be trained on the given data."""


class EvaluationError(PairselectError):
    """A metric is undefined for the given inputs."""


class StoreError(PairselectError):
    """The record store could not be read or written."""
