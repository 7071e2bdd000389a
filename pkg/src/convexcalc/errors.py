"""Exception hierarchy shared by the engine modules."""


class ConvexCalcError(Exception):
    """Base class for every error raised by the engine."""


class ZeroVector(ConvexCalcError, ValueError):
    pass


class SlopeSyntaxError(ConvexCalcError, ValueError):
    pass


class EqualSlopes(ConvexCalcError, ValueError):
    pass


class NotUnimodular(ConvexCalcError, ValueError):
    pass


class InvalidDividingSet(ConvexCalcError, ValueError):
    """A dividing set violates one of its structural invariants.

    The message names the violated invariant.
    """


class BadBoundaryCount(ConvexCalcError, ValueError):
    pass


class OddCount(ConvexCalcError, ValueError):
    pass


class NotStandard(ConvexCalcError, ValueError):
    pass


class UnequalCounts(ConvexCalcError, ValueError):
    pass


class UnsupportedFramePair(ConvexCalcError, ValueError):
    pass


class ScenarioParseError(ConvexCalcError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
