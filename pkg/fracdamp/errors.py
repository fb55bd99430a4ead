"""Exception hierarchy shared by the solver modules and the CLI."""

from __future__ import annotations


class FracDampError(Exception):
    """Base error. ``code`` is a stable machine-readable tag."""

    code: str = "FRACDAMP_ERROR"

    def __init__(self, message: str, *, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code


# ---------------------------------------------------------------------------
# Input validation (CLI exit code 2)
# ---------------------------------------------------------------------------


class ParameterError(FracDampError, ValueError):
    """A user-supplied value violates a constraint."""

    code = "INVALID_PARAMETER"

    def __init__(self, field: str, value: object, reason: str) -> None:
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


class NonPositiveLambda(ParameterError):
    code = "NON_POSITIVE_LAMBDA"

    def __init__(self, value: object) -> None:
        super().__init__("lambda", value, "damping coefficient must be > 0")


class NonPositiveOmega(ParameterError):
    code = "NON_POSITIVE_OMEGA"

    def __init__(self, value: object) -> None:
        super().__init__("omega", value, "restoring frequency must be > 0")


class NuOutOfRange(ParameterError):
    code = "NU_OUT_OF_RANGE"

    def __init__(self, value: object, allowed: str = "[0, 1]") -> None:
        super().__init__("nu", value, f"derivative order must lie in {allowed}")


class InvalidInitialData(ParameterError):
    code = "INVALID_INITIAL_DATA"

    def __init__(self, field: str, value: object) -> None:
        super().__init__(field, value, "initial data must be finite")


class InvalidConfig(ParameterError):
    code = "INVALID_CONFIG"


class LiteralParseError(ParameterError):
    code = "INVALID_LITERAL"


class DomainError(FracDampError, ValueError):
    """Argument outside the open domain of a formula."""

    code = "DOMAIN_ERROR"


# ---------------------------------------------------------------------------
# Numerical breakdown (CLI exit code 3)
# ---------------------------------------------------------------------------


class NumericalError(FracDampError, ArithmeticError):
    code = "NUMERICAL_ERROR"


class BracketFailure(NumericalError):
    code = "BRACKET_FAILURE"


class DegenerateDenominator(NumericalError):
    code = "DEGENERATE_DENOMINATOR"


class QuadratureNonConvergence(NumericalError):
    code = "QUADRATURE_NON_CONVERGENCE"

    def __init__(self, message: str, *, value: float, abserr: float) -> None:
        super().__init__(message)
        self.value = value
        self.abserr = abserr


class MemoryCapExceeded(NumericalError):
    code = "MEMORY_CAP_EXCEEDED"

    def __init__(self, steps: int, cap: int) -> None:
        super().__init__(f"{steps} steps requested, cap is {cap}")
        self.steps = steps
        self.cap = cap
