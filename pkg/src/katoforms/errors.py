"""Exception types shared across the package."""


class KatoformsError(Exception):
    """Base class for all package errors."""


class ZeroDenominator(KatoformsError):
    """Rational function with zero denominator."""


class FieldMismatch(KatoformsError):
    """Operands live over different ambient fields."""


class DegreeMismatch(KatoformsError):
    """Form degrees incompatible with the requested operation."""


class NotClosed(KatoformsError):
    """Cartier operator applied to a form that is not closed."""


class NotExact(KatoformsError):
    """Integration requested for a form that is not exact."""


class BadExponent(KatoformsError):
    """Exponent outside the range admitted by a rewriting rule."""


class CertificateFailed(KatoformsError):
    """A claimed witness identity does not hold."""


class NotAdapted(KatoformsError):
    """Operation defined only for adapted (p-independent variable) data."""


class UnsupportedExtension(KatoformsError):
    """Extension does not expose the structure the operation needs."""


class ParseError(KatoformsError):
    """Malformed textual input."""
