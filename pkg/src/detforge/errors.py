"""Exception types shared across the package."""


class DetforgeError(Exception):
    """Base class for all package errors."""


class MalformedFile(DetforgeError):
    """Input file violates its declared schema."""


class SymmetryViolation(DetforgeError):
    """A matrix/tensor symmetry tolerance was exceeded."""

    def __init__(self, message, indices=None, deviation=None):
        super().__init__(message)
        self.indices = indices
        self.deviation = deviation


class NonPositiveOverlap(DetforgeError):
    """Overlap matrix is not positive definite."""


class IndexOutOfRange(DetforgeError):
    """Orbital index exceeds the declared dimension."""


class IoFailure(DetforgeError):
    """File could not be written or read."""


class LengthMismatch(DetforgeError):
    """Vector length inconsistent with the declared dimension."""


class ShapeMismatch(DetforgeError):
    """Array shapes are inconsistent."""


class NonAntisymmetric(DetforgeError):
    """Matrix expected to be antisymmetric is not."""


class NotOrthonormal(DetforgeError):
    """MO coefficients violate C^T S C = I."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class TargetOutOfRange(DetforgeError):
    """Electron-count target incompatible with the index set."""


class SizeMismatch(DetforgeError):
    """Models of different sizes were combined."""


class TooLarge(DetforgeError):
    """Problem exceeds the exact-enumeration guard."""


class InnerSolverFailure(DetforgeError):
    """Inner combinatorial solver returned an unusable state."""


class LinearAlgebraFailure(DetforgeError):
    """Dense linear algebra step failed (e.g. singular overlap)."""


class ConfigError(DetforgeError):
    """Invalid configuration value or flag combination."""
