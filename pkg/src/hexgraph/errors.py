"""Exception hierarchy shared by the whole package."""


class HexgraphError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(HexgraphError, ValueError):
    """A caller-supplied argument violates a precondition."""


class IllegalMoveError(HexgraphError):
    """Move on an occupied cell, a terminal node, or by the wrong player."""


class GameOverError(HexgraphError):
    """Move attempted on a finished game."""


class InvalidStateError(HexgraphError):
    """Operation applied to a state it is not defined for."""


class ResourceLimitError(HexgraphError):
    """Exact computation refused: input exceeds the configured budget."""


class FormatError(HexgraphError):
    """Persisted artifact is corrupt or has an unsupported version."""
