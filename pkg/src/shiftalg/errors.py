class WorkbenchError(Exception):
    pass


class UnknownLetter(WorkbenchError, ValueError):
    pass


class ClosureViolation(WorkbenchError):
    """A rule-presented shift left the finite/cofinite class."""


class TopUnavailable(WorkbenchError):
    pass


class NotInDomain(WorkbenchError):
    pass


class DepthInsufficient(WorkbenchError):
    pass


class Inconsistent(WorkbenchError):
    pass


class BadDepth(WorkbenchError, ValueError):
    pass


class UnsupportedBackend(WorkbenchError):
    pass


class RingMismatch(WorkbenchError, TypeError):
    pass


class HypothesisViolated(WorkbenchError):
    pass


class HasSink(HypothesisViolated):
    pass


class NotInvertible(WorkbenchError):
    pass


class OutsideLanguage(WorkbenchError, ValueError):
    pass


class Unprintable(WorkbenchError):
    pass


class ParseError(WorkbenchError, ValueError):
    def __init__(self, msg, text="", pos=0):
        self.text = text
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.col = col
        super().__init__(f"{msg} (line {line}, column {col})")
