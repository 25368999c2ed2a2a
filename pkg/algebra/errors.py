"""
Exceptions raised by the algebra package. Each one also derives from the closest builtin, so callers that only know
about ``ArithmeticError`` or ``ValueError`` still catch them.
"""


class AlgebraError(Exception):
    pass


class NotDivisible(AlgebraError, ArithmeticError):
    pass


class DivisorHasExteriorPart(AlgebraError, ValueError):
    pass


class NotHomogeneous(AlgebraError, ValueError):
    pass


class ZeroPolynomial(AlgebraError, ValueError):
    pass


class ExponentOverflow(AlgebraError, OverflowError):
    pass


class NotInSpan(AlgebraError, ArithmeticError):
    """The polynomial has no expression in the Dickson-Mui spanning set, e.g. because it is not GL2-invariant"""


class AmbiguousBasis(AlgebraError, ArithmeticError):
    """The spanning set of a bidegree turned out to be linearly dependent. This is a bug, never an input problem."""


class NegativeExponent(AlgebraError, ArithmeticError):
    """A closed formula produced a negative exponent on a term with nonzero coefficient"""


class InvalidPrime(AlgebraError, ValueError):
    pass


class InvalidIndex(AlgebraError, ValueError):
    """S is not strictly increasing, or S or R has a negative entry"""
