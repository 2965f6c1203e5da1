"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or malformed config file."""


class RegimeError(ConfigError):
    """Phase-matching regime incompatible with the crystal geometry."""


class FrameIOError(IOError):
    """Corrupt or unreadable frame file."""


class AnalysisError(RuntimeError):
    """Base class for estimation-chain failures."""


class SubThermalVarianceError(AnalysisError):
    """Region variance below the shot/read/flat-field noise floor.

    Signals a mismatch between the configured noise model and the data:
    the thermal-excess term that the mode estimator inverts is negative.
    """


class RadiusFitError(AnalysisError):
    """Gaussian shoulder fit failed (degenerate correlation map)."""


class FitRangeError(AnalysisError):
    """No interior least-squares minimum inside the configured bracket."""
