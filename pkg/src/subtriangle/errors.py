"""Exception hierarchy.

The CLI maps these onto its exit codes: ``ParseError`` -> 2,
``NotApplicableError``/``DomainError`` -> 3, ``BudgetError`` -> 4.
"""


class GraphError(ValueError):
    """Invalid graph construction or access."""


class ParseError(GraphError):
    """Malformed graph document."""


class DomainError(GraphError):
    """Operation is undefined for the graph's weight domain."""


class NotApplicableError(ValueError):
    """Graph is below the node-count floor of a theorem or operation."""


class BudgetError(RuntimeError):
    """Enumeration would exceed the configured size budget."""

    def __init__(self, message, estimated_size=None):
        super().__init__(message)
        self.estimated_size = estimated_size
