"""Exception types raised by the library."""


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible for the requested operation."""


class SingularTensor(ArithmeticError):
    """A tensor (or one of its Fourier faces) is not invertible.

    ``face`` is the 0-based index of the offending Fourier face and
    ``sigma_min`` its smallest singular value.  ``which`` names the operand
    when the failure happens inside a composite formula.
    """

    def __init__(self, face: int, sigma_min: float, which: str | None = None):
        self.face = face
        self.sigma_min = sigma_min
        self.which = which
        prefix = f"{which}: " if which else ""
        super().__init__(
            f"{prefix}Fourier face {face} is singular "
            f"(smallest singular value {sigma_min:.3e})"
        )

    def named(self, which: str) -> "SingularTensor":
        return SingularTensor(self.face, self.sigma_min, which)


class ImaginaryResidualExceeded(ValueError):
    """Inverse transform of a face set left a non-negligible imaginary part."""

    def __init__(self, residual: float, limit: float):
        self.residual = residual
        self.limit = limit
        super().__init__(
            f"imaginary residual {residual:.3e} exceeds {limit:.3e}; "
            "face set is not conjugate symmetric"
        )


class ConditionsNotSatisfied(ValueError):
    """The structural conditions of the Moore-Penrose SMW formula fail."""

    def __init__(self, report):
        self.report = report
        failing = ", ".join(
            f"{k}={v:.2e}" for k, v in report.all_residuals().items()
            if not v <= report.threshold
        )
        super().__init__(f"SMW conditions not satisfied: {failing}")


class InfeasibleDims(ValueError):
    """Requested instance dimensions leave no room for the construction."""


class ParseError(ValueError):
    """Malformed tensor file."""
