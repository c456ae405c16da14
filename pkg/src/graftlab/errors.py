"""Exception types shared across the package."""


class GraftLabError(ValueError):
    """Base class for domain errors."""


class GridError(GraftLabError):
    """Lattice too small or inconsistent for the requested estimate."""


class NotSensePreservingError(GraftLabError):
    """A sampled map has |mu| >= 1 somewhere at the current resolution."""


class ShortnessError(GraftLabError):
    """A length bound exceeds the short-curve threshold in force."""


class GeometryError(GraftLabError):
    """A geometric precondition fails (annulus exits collar, moduli too small, ...)."""


class ScenarioError(GraftLabError):
    """Scenario file malformed or schema-invalid."""
