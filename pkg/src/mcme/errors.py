"""Exception hierarchy shared by the package."""


class McmeError(Exception):
    """Base class for all errors raised by mcme."""


class FormatError(McmeError, ValueError):
    """Malformed input file (CSV or network file).

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class CapacityError(McmeError):
    """A contingency table would exceed the configured cell cap."""


class StructureError(McmeError, ValueError):
    """Graph structure violates a DAG invariant (cycle, self-loop, ...)."""


class ValidationError(McmeError, ValueError):
    """Numerical content is invalid (e.g. CPT row not normalised)."""


class UnknownReferenceError(McmeError, KeyError):
    """A name refers to a variable or state that was never declared."""

    def __str__(self):
        return Exception.__str__(self)
