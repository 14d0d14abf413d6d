"""Exception types shared across the engine."""


class GeometryError(Exception):
    """Base class for all engine errors."""


class DomainError(GeometryError):
    """A point lies outside a chart's open coordinate box."""


class DegenerateMetricError(GeometryError):
    """Metric failed the symmetry or positive-definiteness check at a point."""


class StencilError(GeometryError):
    """A finite-difference stencil cannot fit inside the chart domain."""


class RankError(GeometryError):
    """Jacobian rank is below the target dimension at a point."""

    def __init__(self, message, rank=None, singular_values=None):
        super().__init__(message)
        self.rank = rank
        self.singular_values = singular_values


class ConformalityError(GeometryError):
    """A map is not conformal at the queried point."""

    def __init__(self, message, anisotropy=None):
        super().__init__(message)
        self.anisotropy = anisotropy


class WarpPositivityError(GeometryError):
    """A warp function is not strictly positive where it was evaluated."""


class ConfigurationError(GeometryError):
    """Invalid run configuration or violated verifier precondition."""
