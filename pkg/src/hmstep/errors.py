"""Exceptions shared across the package."""


class ValidationError(ValueError):
    """Raised when an input fails a structural or axiomatic precondition.

    The message names the first violated condition (e.g. "triangle
    inequality", "bound exceeded").  The CLI maps this to exit code 2.
    """
