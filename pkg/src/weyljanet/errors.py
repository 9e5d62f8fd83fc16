"""Exception types shared across the package."""


class AmbientMismatch(ValueError):
    """Operands live in different rings or free modules of different rank."""


class ResourceLimitError(RuntimeError):
    """A configured degree/size/iteration cap was exceeded.

    Raised instead of returning a possibly incomplete answer.
    """

    def __init__(self, message: str, *, cap: str | None = None, value: int | None = None):
        super().__init__(message)
        self.cap = cap
        self.value = value


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.message = message
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)
        self.text = text
        self.pos = pos
