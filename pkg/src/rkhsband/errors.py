"""Exception types raised by the library."""


class RKHSBandError(Exception):
    """Base class for all library errors."""


class DomainError(RKHSBandError, ValueError):
    """An input lies outside the domain of a kernel or operation."""


class DegenerateDesign(RKHSBandError, ValueError):
    """Design points coincide and the interpolation problem is ill-posed."""


class IllConditioned(RKHSBandError, ArithmeticError):
    """A Gram matrix could not be factorized within the jitter cap."""


class InfeasibleBound(RKHSBandError, ValueError):
    """No admissible threshold exists for the requested certificate."""


class QuadratureError(RKHSBandError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""
