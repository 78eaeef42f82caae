"""Exception types shared across the library."""


class CalculusError(Exception):
    """Base class for every error raised by this package."""


# -- indices and co-ideals ---------------------------------------------------

class ArityMismatch(CalculusError):
    pass


class EmptySet(CalculusError):
    pass


class ExplicitSetNotDownwardClosed(CalculusError):
    pass


class IndexOutOfRange(CalculusError):
    pass


# -- coefficient rings -------------------------------------------------------

class RingMismatch(CalculusError):
    pass


class RankMismatch(CalculusError):
    pass


class NotADerivation(CalculusError):
    pass


class FiltrationUnavailable(CalculusError):
    pass


# -- truncated series --------------------------------------------------------

class CoidealMismatch(CalculusError):
    pass


class NotASubCoideal(CalculusError):
    pass


class NotAUnit(CalculusError):
    pass


class NonzeroConstantTerm(CalculusError):
    pass


# -- substitution maps -------------------------------------------------------

class NonPositiveOrderImage(CalculusError):
    pass


class IndexNotInSourceCoideal(CalculusError):
    pass


class ChainMismatch(CalculusError):
    pass


# -- higher derivations and connections --------------------------------------

class ZeroTermNotIdentity(CalculusError):
    pass


class LeibnizViolation(CalculusError):
    """Raised when a series that must satisfy the Leibniz identities does not."""


class NotFlat(CalculusError):
    """Curvature obstruction; carries the witnessing pair of directions."""

    def __init__(self, message, i=None, j=None, witness=None):
        super().__init__(message)
        self.i = i
        self.j = j
        self.witness = witness


# -- CLI / serialization -----------------------------------------------------

class UnknownSuite(CalculusError):
    pass


class MalformedInput(CalculusError):
    pass


class ParseError(CalculusError):
    """Syntactic error in an input file; ``position`` is a character offset."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
