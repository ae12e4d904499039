"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid experiment configuration (bad key, value, or combination)."""


class SchemaError(ValueError):
    """CSV column layout does not match the expected schema."""


class DimensionMismatch(ValueError):
    """Array shapes are inconsistent with the problem definition."""


class PilotRankError(ValueError):
    """Pilot block too short to admit orthogonal training sequences."""


class NoInteriorOptimum(RuntimeError):
    """Bracket expansion hit its caps without enclosing an interior optimum."""


class InconsistentSolution(RuntimeError):
    """A scalar solve or derived quantity violates a consistency requirement."""
