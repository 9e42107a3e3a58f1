"""Exception hierarchy shared by all engines."""


class DistDegError(Exception):
    """Base class for all library errors."""


class InputError(DistDegError):
    """Bad or inconsistent input (CLI exit code 2)."""


class BudgetExhausted(DistDegError):
    """A configured budget ran out (CLI exit code 3)."""


class PropertyFailure(DistDegError):
    """A computed value contradicts an exact identity (CLI exit code 1)."""


class ZeroInversion(DistDegError, ZeroDivisionError):
    pass


class SplitDetected(DistDegError):
    """A declared minimal polynomial turned out reducible."""

    def __init__(self, certificate):
        super().__init__(str(certificate))
        self.certificate = certificate


class DimensionBlowup(BudgetExhausted):
    pass


class NonStabilized(BudgetExhausted):
    pass


class InconsistentPresentation(InputError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotInversiveBase(InputError):
    pass


class MissingRefinement(InputError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InverseDataRequired(InputError):
    pass


class CrossCheckFailed(PropertyFailure):
    pass


class RankDeficient(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=1, col=1, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)
