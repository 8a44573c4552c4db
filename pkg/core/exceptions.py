class LinkageError(Exception):
    """Base class for every error raised by the tournament linkage toolkit."""


class InputError(LinkageError, ValueError):
    """Malformed caller input: out-of-range vertices, overlapping sets, bad TRN text."""


class PreconditionViolation(LinkageError):
    """
    A step that is guaranteed to succeed under its stated hypotheses did not.
    `step` names the pipeline step, `inequality` the bound that failed.
    """

    def __init__(self, message, step="", inequality=""):
        super().__init__(message)
        self.step = step
        self.inequality = inequality


class HypothesisViolation(LinkageError):
    """The connectivity / minimum out-degree gate of the linker failed."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class BudgetExceeded(LinkageError):
    """An exhaustive oracle was asked to run past its configured budget."""

    def __init__(self, oracle, limit, requested):
        super().__init__(
            f"{oracle}: budget {limit} exceeded (requested {requested})"
        )
        self.oracle = oracle
        self.limit = limit
        self.requested = requested
