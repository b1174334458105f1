class MonfgError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(MonfgError, ValueError):
    """Shapes, indices or probabilities do not fit the game."""


class ParseError(MonfgError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnsupportedInputError(MonfgError):
    """The input is valid but outside what a routine is built to handle."""
