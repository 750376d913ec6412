"""Semantic exception hierarchy."""


class StableKitError(Exception):
    """Base class for all stablekit errors."""


class ParameterError(StableKitError, ValueError):
    """Invalid distribution/map/experiment parameters or empty samples."""


class AccuracyError(StableKitError):
    """Quadrature did not reach the requested tolerance.

    Carries the achieved absolute-error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegenerateOrbitError(StableKitError):
    """Orbit hit the measure-zero exceptional set of the map."""


class DensityPoleError(StableKitError):
    """Density evaluated exactly at an integrable pole."""


class CenteringError(StableKitError):
    """Centering constant is numerically unreliable; increase N or L."""


class DegenerateDataError(StableKitError):
    """Test statistic undefined on the given data (e.g. all values tied)."""
