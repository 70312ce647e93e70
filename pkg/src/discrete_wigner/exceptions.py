"""Exception types raised across the package."""

import numpy as np


class DegreeError(ValueError):
    """Requested polynomial degree is outside the admissible range."""


class DimensionError(ValueError):
    """Matrix shapes do not fit together."""


class SingularityError(np.linalg.LinAlgError):
    """A matrix that must be inverted is singular (e.g. repeated nodes)."""


class ConditioningError(np.linalg.LinAlgError):
    """Float nodes are too close together to invert reliably."""


class ModelError(ValueError):
    """A model descriptor violates one of its invariants."""


class RealnessError(ArithmeticError):
    """A quantity that must be real has a non-negligible imaginary part."""


class NormalizationError(ValueError):
    """A state vector is not normalized."""


class CostGuardError(ValueError):
    """Brute-force enumeration was asked for more work than it allows."""
