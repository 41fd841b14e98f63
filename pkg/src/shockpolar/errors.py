"""Exception types raised by shockpolar."""


class ShockPolarError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ShockPolarError, ValueError):
    """Invalid physical or numerical input parameters."""


class DomainError(ValidationError):
    """A state variable lies outside the domain of an equation of state."""

    def __init__(self, name, value, lo, hi):
        self.name = name
        self.value = value
        self.interval = (lo, hi)
        super().__init__(f"{name} = {value!r} outside valid interval [{lo!r}, {hi!r}]")


class RangeError(ValidationError):
    """A polar parameter lies outside the range where a formula applies."""


class ComputationError(ShockPolarError, ArithmeticError):
    """A numerical procedure failed to produce a result."""


class BeyondNormalShockError(ComputationError):
    """The requested state lies past the normal-shock end of the polar."""

    def __init__(self, param, eta_sq):
        self.param = param
        self.eta_sq = eta_sq
        super().__init__(f"parameter {param!r} is beyond the normal shock (eta^2 = {eta_sq:.3e})")


class EosDomainTooShortError(ComputationError):
    """The normal-shock endpoint is not reached inside the eos domain."""


class InconsistentStateError(ComputationError):
    """A supposed polar state violates the mass/tangential jump relations."""
