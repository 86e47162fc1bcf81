"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the front end never has
to keep its own table in sync.
"""


class SchemeError(Exception):
    exit_code = 1


class StructureError(SchemeError, ValueError):
    """The input is not even a well-formed relation matrix."""

    exit_code = 1


class SchemaError(SchemeError, ValueError):
    """A JSON document does not match the expected schema."""

    exit_code = 1

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ResourceCapError(SchemeError):
    exit_code = 3


class NumericalDegeneracyError(SchemeError, ArithmeticError):
    exit_code = 4


class UnsupportedInputError(SchemeError, ValueError):
    exit_code = 1
