"""Exception types raised by the engine."""


class QpnError(Exception):
    """Base class for all engine errors."""


class NetworkFormatError(QpnError):
    """A network payload failed to parse or failed validation."""


class QueryError(QpnError):
    """A query violates its invariants for the given network."""


class EvidenceSeparatedError(QpnError):
    """The evidence node has no unblocked chain to the interest node.

    The relevant network is empty; callers treat this as a distinct
    outcome rather than a failure of the machinery.
    """

    def __init__(self, evidence: str, interest: str):
        self.evidence = evidence
        self.interest = interest
        super().__init__(
            f"evidence {evidence!r} is separated from interest {interest!r}; "
            "the relevant network is empty"
        )


class AmbiguousInfluenceError(QpnError):
    """Pivot analysis rejects networks containing '?'-signed links."""


class PivotOrderError(QpnError):
    """Internal invariant of the pivot search was violated.

    Raised when the articulation ordering or the step-wise sign checks
    are inconsistent, which indicates the input was not a proper
    relevant network (or an engine bug), never a user mistake.
    """


class QuantifyError(QpnError):
    """Probability-table sampling or exact inference failed."""


class BudgetError(QpnError):
    """The network exceeds the exact-enumeration size budget."""
