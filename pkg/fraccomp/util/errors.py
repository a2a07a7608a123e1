"""
Exceptions raised by fraccomp.

Validation errors derive from ValueError and make the CLI exit with status 2,
numerical failures derive from ArithmeticError and make it exit with status 3.
"""

from typing import Optional, Sequence


class FCError(Exception):
    """Base class of all fraccomp errors."""


class InvalidParams(FCError, ValueError):
    """Parameters violate a type invariant (e.g. alpha <= 0)."""


class InvalidConfig(FCError, ValueError):
    """Numerical configuration out of its admissible range."""


class InvalidSpec(FCError, ValueError):
    """
    Malformed job specification.

    Attributes:
        line: Line number in the spec file where the problem was found, if known.

    """

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NumericalError(FCError, ArithmeticError):
    """Base class of numerical failures."""


class NonConvergence(NumericalError):
    """A series or iteration failed its internal error bound."""


class InversionFailure(NumericalError):
    """Numerical Laplace inversion failed."""


class ContourFailure(InversionFailure):
    """
    Talbot sums overflowed or were too ill-conditioned to trust.

    Attributes:
        indices: Indices of the failing evaluation points.

    """

    def __init__(self, message: str, indices: Sequence[int] = ()) -> None:
        self.indices = list(indices)
        super().__init__(message)


class InsufficientGrid(NumericalError):
    """Grid too coarse, nonuniform or not starting at zero."""


class OrderOutOfRange(NumericalError):
    """Derivative order outside of the supported range."""


class HorizonTooShort(NumericalError):
    """Integrand tail is not negligible at the quadrature horizon."""


class TailDivergence(NumericalError):
    """Panel contributions did not decay before the integration cap."""


class GridMismatch(NumericalError):
    """Grid functions do not share the inner grid."""


class UnsupportedIC(NumericalError):
    """Initial conditions cannot be handled by the composition route."""


class KernelNotAvailable(NumericalError):
    """Kernel needed for sampling could not be tabulated."""


class VarianceBlowup(NumericalError):
    """Signed weights cancel too strongly for a usable estimate."""


class ImaginaryResidueError(NumericalError):
    """Field expected real has a non-negligible imaginary part."""


class AliasWarning(UserWarning):
    """Spectral integrand not negligible at the edge of the frequency grid."""
