"""Exception types shared across the package."""


class TruncationExhausted(ArithmeticError):
    """A series computation needed more precision than it was allowed."""


class ParseError(ValueError):
    """Malformed polynomial text; ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
