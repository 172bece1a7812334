"""Exception hierarchy shared by every module."""


class FadingError(Exception):
    """Base class for library errors."""


class DomainError(FadingError, ValueError):
    """An argument lies outside a function's domain."""


class QuadratureError(FadingError):
    """Adaptive quadrature did not reach its tolerance."""

    def __init__(self, message, best_estimate=float("nan"), error_estimate=float("inf")):
        super().__init__(f"{message} (best estimate {best_estimate!r}, error {error_estimate!r})")
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class IntegrandDomainError(FadingError):
    """The integrand returned NaN."""


class BracketError(FadingError):
    """No sign change inside the root bracket."""


class DegenerateParametersError(FadingError):
    """Parameters collide with a singular configuration (pole collision, eta = 1)."""


class ClosedFormUnavailable(FadingError):
    """The requested closed form does not apply to these parameters."""
