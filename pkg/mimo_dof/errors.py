"""
Exception hierarchy for mimo-dof.

Every error raised on purpose by the package derives from DofError, which is
itself a ValueError so callers that only catch ValueError keep working.
"""


class DofError(ValueError):
    """Base class for all mimo-dof errors"""


class ConfigError(DofError):
    """Malformed antenna tuple, scenario file, geometry or SNR range"""


class RankDeficiencyError(DofError):
    """A channel matrix (or a stacked/projected one) lost rank"""


class HypothesisError(DofError):
    """A scheme was applied to a network that violates its preconditions"""


class ConstructionError(DofError):
    """The zero-forcing construction leaked interference or miscounted streams"""


class EstimationError(DofError):
    """Slope estimation could not be carried out"""
