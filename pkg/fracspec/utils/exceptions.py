# fracspec/utils/exceptions.py

class FracSpecError(Exception):
    """
    Base error for the package.

    Attributes:
        detail (str): Human readable diagnostic, printed by the CLI.
        exit_code (int): Process exit code the CLI maps this error to.
    """
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidParameterError(FracSpecError):
    """A numeric parameter is outside its admissible range."""


class InvalidGridError(FracSpecError):
    """The grid cannot support the requested operation."""


class DegenerateInputError(FracSpecError):
    """The input is degenerate (for example a zero field that must be normalized)."""


class InvalidInputError(FracSpecError):
    """A field violates a sign or normalization precondition."""


class UnsupportedModeError(FracSpecError):
    """The kernel quadrature mode is not available for these parameters."""


class UnsupportedError(FracSpecError):
    """The requested computation is not provided."""


class NumericalFailureError(FracSpecError):
    """Non-finite values appeared during a computation."""


class ConfigError(FracSpecError):
    """The run configuration cannot be resolved."""


class DegenerateDirectionWarning(UserWarning):
    """A linear minimization received w ≡ 0 and returned the zero potential."""
