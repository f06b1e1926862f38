"""Exception hierarchy shared by the library and the CLI."""


class RankError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InputError(RankError, ValueError):
    """Malformed or inconsistent input (bad vertex, wrong signature, ...)."""

    exit_code = 2


class ParseError(InputError):
    """An ordinal expression could not be parsed."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MoveError(InputError):
    """An illegal move was made in the rank game."""

    def __init__(self, message, legal):
        super().__init__(f"{message}; legal moves: {legal}")
        self.legal = legal


class ResourceError(RankError):
    """A configured size or budget cap would be exceeded."""

    exit_code = 3
