"""Exception hierarchy for the mockrad package."""


class MockradError(Exception):
    """Base class for all mockrad errors."""


# --- series kernel ---

class ZeroLeadingCoefficient(MockradError):
    """Inversion of a series with no nonzero coefficient below truncation."""


class FractionalExponentNegation(MockradError):
    """q -> -q^m substitution applied to a series with fractional exponents."""


class DivergentProduct(MockradError):
    """Infinite Pochhammer product whose factor exponents do not increase."""


class PoleInNegativeIndex(MockradError):
    """Negative-index Pochhammer whose denominator has a vanishing factor."""


class BeyondTruncation(MockradError):
    """Coefficient requested at or beyond the series truncation order."""


# --- classical forms / Klein forms ---

class EtaQuotientMismatch(MockradError):
    """Internal self-check failure: sum side and eta-quotient side disagree."""


class NotInUpperHalfPlane(MockradError):
    """tau does not satisfy Im(tau) > 0."""


class NonconvergentTail(MockradError):
    """Numeric infinite product failed to reach its tail threshold."""


# --- catalog / evaluation ---

class UnknownFunction(MockradError):
    """Name not present in the mock theta catalog or recipe table."""


class TailBoundFailure(MockradError):
    """Geometric decay never established within the term budget."""


class DenominatorUnderflow(MockradError):
    """A partial denominator fell below the underflow threshold."""


# --- bilateral ---

class NonconvergentBilateral(MockradError):
    """Two-sided sum requested for a function outside the supported set."""


class ResidualFractionalExponent(MockradError):
    """Modular product failed to reduce to integer exponents."""


class InsufficientTruncation(MockradError):
    """Identity check requested beyond the common known order."""


# --- radial ---

class NoApplicableCase(MockradError):
    """No closed-form theorem case covers this root of unity."""


class VanishingDenominator(MockradError):
    """Closed-formula denominator vanished; classification bug."""


class GridTooCoarse(MockradError):
    """Radial scan needs at least three grid points."""
