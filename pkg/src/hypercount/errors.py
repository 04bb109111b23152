"""Exception types raised across the package."""


class HypercountError(Exception):
    """Base class for all package errors."""


class NotPrimePower(HypercountError, ValueError):
    pass


class Unsupported(HypercountError, ValueError):
    pass


class DivisionByZero(HypercountError, ZeroDivisionError):
    pass


class OutOfRange(HypercountError, IndexError):
    pass


class BasepointLoop(HypercountError, ValueError):
    pass


class TooLarge(HypercountError, ValueError):
    pass


class NoTriangle(HypercountError, ValueError):
    pass


class BadParams(HypercountError, ValueError):
    pass


class BadRank(HypercountError, ValueError):
    pass


class NoPrimePower(HypercountError, ValueError):
    pass


class VerificationFailed(HypercountError):
    """A counterexample check did not hold; ``check`` names the first failure."""

    def __init__(self, check, detail=""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class ParseError(HypercountError, ValueError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)


class SchemaError(HypercountError, ValueError):
    def __init__(self, field, msg):
        self.field = field
        super().__init__(f"{field}: {msg}")
