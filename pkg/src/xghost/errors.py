"""Exception types shared across the package."""


class XGhostError(Exception):
    """Base class for all package errors."""


class GridMismatchError(XGhostError):
    """Two fields that must share a grid do not."""


class BoundsError(XGhostError):
    """A region or index lies outside its parent grid."""


class RasterFormatError(XGhostError):
    """Malformed header, truncated payload, or dimension mismatch in a raster file."""


class UnderResolvedError(XGhostError):
    """A mask period or feature is not resolved by the grid."""


class PurePhaseError(XGhostError):
    """The near-field image operator was asked to divide by a zero attenuation
    coefficient; use the wave-propagation oracle for pure-phase objects."""


class ScheduleMismatchError(XGhostError):
    """Bucket series, reference stack, or basis descriptors do not agree."""


class ProfileError(XGhostError):
    """A profile has no usable peak or half-maximum crossings."""


class ConfigError(XGhostError):
    """Invalid or incomplete experiment configuration."""


class GuardViolation(XGhostError):
    """A numerical validity guard failed and strict mode escalated it."""
