"""Exception types shared across the package."""


class InstanceParseError(ValueError):
    """Instance file or dict is malformed (bad JSON, missing keys, bad values)."""


class DimensionMismatchError(ValueError):
    """Matrix or vector dimensions are inconsistent with each other."""


class DefinitenessError(ValueError):
    """A weight matrix violates its required definiteness (PSD state / PD input)."""


class UnsupportedInitError(ValueError):
    """Operation requires a deterministic initial state but got a covariance."""


class NumericError(RuntimeError):
    """Numerical failure that indicates a bug or an ill-posed computation."""


class EnumerationLimitError(ValueError):
    """Requested exhaustive enumeration exceeds the built-in size guard."""
