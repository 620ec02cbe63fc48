"""Exception hierarchy for the coorbits package."""


class CoorbitError(Exception):
    """Base class for all coorbits errors."""


class DimensionMismatch(CoorbitError):
    """An input vector or matrix has the wrong dimension for the operation."""


class DegenerateDimension(CoorbitError):
    """Requested ambient dimension is too small to act on."""


class NonOrthogonalGenerator(CoorbitError):
    """A supplied generator matrix is not orthogonal within tolerance."""


class ClosureExceedsCap(CoorbitError):
    """Group closure grew past the configured maximum order."""


class WindowIndexOutOfRange(CoorbitError):
    """Window index outside 1..p."""


class EnumerationTooLarge(CoorbitError):
    """Exact subset enumeration would exceed the configured cap."""


class AllPairsEquivalent(CoorbitError):
    """Every sampled pair collapsed to the same orbit; no ratio is defined."""


class GenericityFailure(CoorbitError):
    """Could not draw a full-rank random map within the retry budget."""


class KernelIntersectsFamily(CoorbitError):
    """The map's kernel meets one of the subspaces; the lower bound is void."""


class DimensionTooLarge(CoorbitError):
    """Dense sphere grids are only available in very small dimension."""


class ConfigError(CoorbitError):
    """A run configuration file is missing, malformed, or inconsistent."""


class UsageError(CoorbitError):
    """Bad command-line invocation."""
