"""Exception hierarchy shared by every module of the package."""


class JudgmentAggregationError(Exception):
    """Base class for all errors raised by judgagg."""


class FormulaSyntaxError(JudgmentAggregationError, ValueError):
    """Malformed formula text. ``position`` is the 0-based character offset."""

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class MissingAtomError(JudgmentAggregationError, KeyError):
    """A valuation does not assign a value to an atom of the formula."""


class ResourceLimitError(JudgmentAggregationError):
    """An exhaustive search would exceed its configured size cap."""


class AgendaError(JudgmentAggregationError, ValueError):
    """An agenda, judgment set, profile or decomposition violates its invariants."""


class InconsistentJudgmentError(AgendaError):
    """A judgment set that must be Gamma-consistent is not."""


class PreconditionError(JudgmentAggregationError, ValueError):
    """An operation was called outside its domain."""
