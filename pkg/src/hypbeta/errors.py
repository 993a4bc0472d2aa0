"""Exception hierarchy shared by all hypbeta modules."""


class HypbetaError(Exception):
    """Base class for all errors raised by this package."""


# --- series / product evaluation ---

class BaseOutOfRange(HypbetaError):
    """|q| >= 1 (or |p| >= 1) where a convergent product/series is required."""


class NomeOutOfRange(HypbetaError):
    """Theta/eta argument with Im <= 0, i.e. nome of modulus >= 1."""


class DivisionByZeroPole(HypbetaError):
    """A quotient of infinite products hit a vanishing denominator."""


class DivergentSeries(HypbetaError):
    """Series argument outside the convergence region and not terminating."""


class PoleInLowerParams(HypbetaError):
    """A lower parameter of a (bi)basic series produced a zero factor."""


class OutsideAnnulus(HypbetaError):
    """Bilateral series argument outside its convergence annulus."""


class ParameterOutOfRange(HypbetaError):
    """A summation-identity parameter violates its stated constraint."""


# --- hyperbolic / elliptic gamma ---

class OutsideStrip(HypbetaError):
    """Argument of the defining log-integral outside the analyticity strip."""


class AtPole(HypbetaError):
    """Evaluation requested within the pole-proximity threshold of a pole."""

    def __init__(self, message, nearest=None):
        super().__init__(message)
        self.nearest = nearest


class ShiftOverflow(HypbetaError):
    """Functional-equation continuation would need too many steps."""


class DegenerateRatio(HypbetaError):
    """Shintani product requested with Im(a_plus/a_minus) <= 0."""


class RegimeUnsupported(HypbetaError):
    """tau outside the union of the trigonometric and hyperbolic regimes."""


# --- quadrature ---

class QuadratureFailure(HypbetaError):
    """Base class for quadrature engine failures."""


class MaxSubdivisions(QuadratureFailure):
    """Adaptive refinement exhausted its panel budget."""

    def __init__(self, message, worst_panel=None):
        super().__init__(message)
        self.worst_panel = worst_panel


class NonFiniteSample(QuadratureFailure):
    """Integrand returned NaN or infinity at a quadrature node."""


class NoDecayDetected(QuadratureFailure):
    """|f| did not decrease over successive probe radii on an infinite contour."""


# --- identity registry ---

class UnknownIdentity(HypbetaError):
    """Identity id not present in the registry."""


class DomainViolation(HypbetaError):
    """A parameter-domain inequality of an identity is violated."""

    def __init__(self, constraint, value, bound):
        super().__init__(f"{constraint}: got {value}, bound {bound}")
        self.constraint = constraint
        self.value = value
        self.bound = bound


class PoleNearContour(HypbetaError):
    """An integrand pole lies too close to the integration contour."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole
