"""Exception types shared by the library. Every error is also a ValueError."""


class LtkError(ValueError):
    """Base class for all errors raised by the toolkit."""


class ParseError(LtkError):
    """Raised for text outside the formula/rule grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class AgentIndexError(ParseError):
    """Raised when an agent modality names an agent outside 1..k."""


class SubstitutionError(LtkError):
    """Raised when a substitution does not map a variable of the formula."""


class UnknownWorldError(LtkError):
    """Raised when a world id is not part of the frame."""


class UncoveredVariableError(LtkError):
    """Raised when the valuation does not cover a variable of the formula."""


class FrameError(LtkError):
    """Raised for structurally invalid frame data (overlapping clusters, bad partitions)."""


class NormalFormError(LtkError):
    """Raised when a rule is not in reduced normal form or is too large to materialize."""


class WitnessError(LtkError):
    """Raised when a witness refers to missing worlds or thetas."""


class ConfigError(LtkError):
    """Raised for invalid configuration values."""
