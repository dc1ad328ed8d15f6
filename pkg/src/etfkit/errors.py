"""Exception hierarchy shared by all etfkit modules."""

from __future__ import annotations


class EtfkitError(ValueError):
    """Base class for every error raised by etfkit."""


class NotPrimePower(EtfkitError):
    pass


class NotRegular(EtfkitError):
    pass


class NotStronglyRegular(EtfkitError):
    def __init__(self, pair: tuple[int, int], message: str):
        super().__init__(message)
        self.pair = pair


class TooLarge(EtfkitError):
    pass


class BadResidueClass(EtfkitError):
    pass


class NotAFrame(EtfkitError):
    pass


class NotUntf(EtfkitError):
    pass


class NotEtf(EtfkitError):
    pass


class SizeMismatch(EtfkitError):
    pass


class NotHadamard(EtfkitError):
    pass


class FullRank(EtfkitError):
    pass


class SingularX2(EtfkitError):
    pass


class DimensionMismatch(EtfkitError):
    pass


class TooLargeForDense(EtfkitError):
    pass


class GerzonSaturated(EtfkitError):
    pass


class GerzonViolation(EtfkitError):
    """An ETF larger than the Gerzon limit was observed; indicates a bug upstream."""


class ComplexFrame(EtfkitError):
    pass


class IndexOutOfRange(EtfkitError):
    pass


class BudgetExceeded(EtfkitError):
    pass


class ParseError(EtfkitError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
