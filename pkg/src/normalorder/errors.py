"""Exception hierarchy shared by all modules."""


class NormalOrderError(Exception):
    """Base class for every error raised by this package."""


class DivisionByNonUnit(NormalOrderError, ZeroDivisionError):
    pass


class CompositionNonNilpotent(NormalOrderError, ValueError):
    pass


class ReversionNotDefined(NormalOrderError, ValueError):
    pass


class ExpOfUnit(NormalOrderError, ValueError):
    pass


class LogOfNonUnit(NormalOrderError, ValueError):
    pass


class NotLinear(NormalOrderError, ValueError):
    pass


class OrderTooLow(NormalOrderError, ValueError):
    pass


class UnknownFamily(NormalOrderError, KeyError):
    pass


class UnknownSequence(NormalOrderError, KeyError):
    pass


class NonIntegerTerm(NormalOrderError, ArithmeticError):
    pass


class SeriesTailTooLarge(NormalOrderError, ArithmeticError):
    pass


class ParseError(NormalOrderError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class LoweringError(NormalOrderError, ValueError):
    pass


class TruncationTooSmall(UserWarning):
    """Coherent vector has non-negligible mass beyond the Fock cutoff."""
