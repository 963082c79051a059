"""
Exception hierarchy for catdual.

Check-style operations return report objects instead of raising; the classes
below are reserved for invalid input and impossible constructions.
"""


class CatDualError(Exception):
    """Base class for all catdual errors."""


class LabelNotFoundError(CatDualError, KeyError):
    """An object or module label is not part of the category."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class SplittingIndexError(CatDualError, IndexError):
    """A splitting-space (hom) index is out of range."""


class ValidationError(CatDualError, ValueError):
    """Category, module or model data failed validation."""


class PentagonInconsistencyError(ValidationError):
    """No associator consistent with the pentagon axiom could be found."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class GeometryError(CatDualError, ValueError):
    """Operation not defined for the chain geometry (ring vs open)."""


class NotRealizableError(CatDualError):
    """A symmetry label or twist has no realization on the given module."""


class DimensionMismatchError(CatDualError, ValueError):
    """Operators or bases of incompatible dimension were combined."""


class NonHermitianError(CatDualError, ValueError):
    """A Hermitian operator was required."""

    def __init__(self, message: str, asymmetry: float = float("nan")):
        super().__init__(message)
        self.asymmetry = asymmetry


class CommutatorError(CatDualError, ValueError):
    """Operators that must commute do not."""

    def __init__(self, message: str, pair=None, norm: float = float("nan")):
        super().__init__(message)
        self.pair = pair
        self.norm = norm


class RankDeficiencyError(CatDualError, ValueError):
    """A product could not be expanded in the extracted algebra basis."""

    def __init__(self, message: str, product=None):
        super().__init__(message)
        self.product = product


class ConfigError(CatDualError, ValueError):
    """Run configuration violates the schema."""

    def __init__(self, message: str, field_path: str = ""):
        super().__init__(f"{field_path}: {message}" if field_path else message)
        self.field_path = field_path
