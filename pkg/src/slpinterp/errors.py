"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad modulus, bad SLP text, ...)."""


class SlpSyntaxError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """A desk-scale cap was exceeded (sieve size, oracle expansion size)."""


class InvariantError(RuntimeError):
    """An internal invariant failed; indicates a parameter bug, not bad input."""
