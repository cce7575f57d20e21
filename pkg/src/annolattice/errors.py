"""Exception hierarchy.

``InputError`` covers anything wrong with the documents handed to the
library (syntax, duplicates, dangling references, unknown ids).
``ValidationError`` covers well-formed inputs that break a structural rule
(cycles, annotations tagged with unknown concepts or with categories).
"""


class AnnoLatticeError(Exception):
    """Base class for all library errors."""


class InputError(AnnoLatticeError, ValueError):
    """Malformed or inconsistent input document."""


class DocumentSyntaxError(InputError):
    """A document failed to parse. Carries the 1-based line/column."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:{column}:" if column is not None else f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UnknownIdError(InputError, KeyError):
    """Reference to an object, attribute or concept that does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ValidationError(AnnoLatticeError):
    """Structurally invalid taxonomy or annotation log."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class EditError(AnnoLatticeError, ValueError):
    """A taxonomy edit cannot be applied."""


class OracleLimitError(AnnoLatticeError):
    """Brute-force enumeration requested beyond its attribute limit."""


class IncompleteConceptSetError(AnnoLatticeError, ValueError):
    """Concepts passed to ``build_lattice`` are not the full concept set."""
