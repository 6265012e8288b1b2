"""Exception hierarchy shared by every module of the package."""


class FciError(Exception):
    """Base class for all errors raised by fcigroups."""


class NotAUnit(FciError, ValueError):
    pass


class PrecisionMismatch(FciError, ValueError):
    pass


class PrecisionTooLow(FciError, ValueError):
    pass


class GroupMismatch(FciError, ValueError):
    pass


class NotAPGroup(FciError, ValueError):
    pass


class OrderCapExceeded(FciError):
    pass


class NonPeriodic(FciError, ValueError):
    pass


class InfiniteGroup(FciError, ValueError):
    pass


class InfiniteBase(FciError, ValueError):
    pass


class IncompatibleBase(FciError, ValueError):
    pass


class InvalidCocycle(FciError, ValueError):
    pass


class Inconsistent(FciError, RuntimeError):
    """An internal consistency check failed; this indicates a bug."""


class SpecInvalid(FciError, ValueError):
    pass


class SpecParseError(FciError, ValueError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            msg = f"{msg} (line {line}, column {column})"
        super().__init__(msg)
