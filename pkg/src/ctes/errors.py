"""Exception hierarchy shared by the ctes modules."""


class CTESError(Exception):
    pass


class DomainError(CTESError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(CTESError, ValueError):
    """A setup description cannot produce a trustworthy interferogram."""


class ValidationError(CTESError, ValueError):
    pass


class ParseError(CTESError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PlanningError(CTESError, ValueError):
    pass


class CoverageViolation(CTESError):
    """Raised when a sequence of interferograms leaves trial factors unchecked.

    ``gaps`` holds ``(lo, hi)`` pairs of uncovered trial-factor sub-intervals.
    """

    def __init__(self, message, gaps):
        self.gaps = list(gaps)
        super().__init__(message)
