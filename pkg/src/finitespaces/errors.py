"""Exception types shared by all modules."""


class FiniteSpaceError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(FiniteSpaceError):
    """Input data violates a structural invariant (transitivity, commuting squares, ...)."""


class UnknownPointError(ValidationError):
    pass


class DuplicatePointError(ValidationError):
    pass


class BackendMismatch(FiniteSpaceError):
    """Objects from different coefficient backends (or different rings) were combined."""


class BackendLimitation(FiniteSpaceError):
    """The backend cannot represent the requested object exactly."""


class WindowRequired(FiniteSpaceError):
    """A graded computation needs a degree window and none was configured."""

    def __init__(self, what="computation"):
        super().__init__(f"degree window required for {what} on the GradedMonomial backend")
        self.what = what


class SearchBudgetExceeded(FiniteSpaceError):
    """A bounded search ran out of budget before reaching a decision."""


class ParseError(FiniteSpaceError):
    def __init__(self, message, line=None, column=None, source=None):
        loc = ""
        if line is not None:
            loc = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        prefix = f"{source}: " if source else ""
        super().__init__(prefix + loc + message)
        self.line = line
        self.column = column
