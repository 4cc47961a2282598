"""Exception hierarchy. Every error raised by the library derives from FuzzyatError."""


class FuzzyatError(Exception):
    """Base class for all errors raised by fuzzyat."""


class InvalidParameterError(FuzzyatError, ValueError):
    """A constructor or operation argument violates a stated precondition."""


class UnsupportedOperationError(FuzzyatError):
    """The operation is well-formed but not supported for these operands."""


class RepresentationMismatchError(FuzzyatError):
    """A binary fuzzy operation received one discrete and one piecewise-linear operand."""


class UnknownDomainError(FuzzyatError):
    """No builtin attribute domain with the requested name."""


class DomainViolationError(FuzzyatError):
    """A value lies outside the attribute domain's carrier."""


class ModelError(FuzzyatError):
    """The attack tree (or model file) violates a structural invariant."""


class ParseError(ModelError):
    """Syntax or semantic error in a model file, with a 1-based source location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class InvalidSplitError(FuzzyatError):
    """split_at_module was called on a node that is not a module."""


class BlowupError(FuzzyatError):
    """A computation exceeded its configured size cap (minimal-attack suite or
    enumeration combinations)."""
