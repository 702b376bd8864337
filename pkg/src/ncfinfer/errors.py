"""Exception types shared across the package."""


class ToolError(Exception):
    """Base class for all errors raised by this package.

    Carries an optional ``context`` dict so the CLI can emit a
    machine-readable error object without string parsing.
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class InconsistentDataError(ToolError):
    """Two transition pairs share an input but disagree on the output.

    The data admits no function at all, which usually means the wiring
    diagram assigns the wrong regulators to a node.
    """


class ParseError(ToolError):
    """An input file does not conform to its documented format."""


class CapacityError(ToolError):
    """A request exceeds a documented size bound (arity or state-space cap)."""


class ConfigurationError(ToolError):
    """A run was requested with settings that cannot produce a result."""


class InvariantViolation(ToolError):
    """An internal consistency guarantee failed, e.g. a trajectory whose
    states do not share one phase-space component."""
