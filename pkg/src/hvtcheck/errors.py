"""Exception hierarchy shared across the package."""


class HVTError(Exception):
    """Base class for every error raised by hvtcheck."""


class InvalidRegion(HVTError):
    pass


class TimeNotOutsideRegion(HVTError):
    pass


class BadTimeOrder(HVTError):
    pass


class EnumerationBudget(HVTError):
    pass


class UnsupportedLawKind(HVTError):
    pass


class NullCondition(HVTError, ZeroDivisionError):
    """Conditioning on an event of probability zero."""


class PreconditionFailed(HVTError):
    pass


class NullSettings(HVTError):
    """Some settings pair has zero weight, so P(A,B|a,b) is undefined."""


class BadTable(HVTError):
    pass


class BadFamily(HVTError):
    pass


class SearchBudget(HVTError):
    pass


class UnsupportedAngle(HVTError):
    pass


class ValidationError(HVTError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ParseError(HVTError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")
