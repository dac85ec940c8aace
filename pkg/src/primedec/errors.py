"""Exception types shared across the package."""


class PrimedecError(Exception):
    """Base class for all errors raised by primedec."""


class ParseError(PrimedecError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class ResourceLimitError(PrimedecError):
    """A configured cap (DNF size, residue modulus) was exceeded."""


class NotASentenceError(PrimedecError):
    def __init__(self, free):
        self.free = sorted(free)
        super().__init__(f"formula has free variables: {', '.join(self.free)}")


class StarConditionError(PrimedecError):
    """A system of affine maps fails the star condition (a fixed prime divides every product)."""

    def __init__(self, witness_prime: int, message: str | None = None):
        self.witness_prime = witness_prime
        super().__init__(message or f"star condition fails: {witness_prime} divides every product")


class AdmissibilityError(StarConditionError):
    pass
