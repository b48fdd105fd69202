"""Exception hierarchy shared by all treefo modules."""


class TreefoError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TreefoError):
    """Malformed input: tree text, automaton file, expression file, unknown symbol."""


class ConfigError(TreefoError):
    """Invalid configuration, e.g. an arity cap below the maximal alphabet rank."""


class StructureError(TreefoError):
    """A tree violates ranking or sort discipline (e.g. in flattening)."""


class ContractError(TreefoError):
    """A precondition of an operation was violated by the caller."""


class ClassifyError(TreefoError):
    """Type classification failed; carries diagnostics about the offending algebra."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CloneSizeError(TreefoError):
    """The operation-table closure exceeded the configured size budget."""
