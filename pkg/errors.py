"""
Error types raised by the geometry, training and file layers.

Statuses such as "not converged" or a tie in Max_rows are reported in
results, not raised.
"""


class GeomorphError(Exception):
    """Base class for every error this package raises on purpose"""


class DuplicateValue(GeomorphError):
    pass


class EmptyFeature(GeomorphError):
    pass


class UnknownValue(GeomorphError):
    pass


class DuplicateCell(GeomorphError):
    pass


class ShapeMismatch(GeomorphError):
    pass


class ZeroColumn(GeomorphError):
    pass


class EmptyInventory(GeomorphError):
    pass


class UnknownStem(GeomorphError):
    pass


class DegenerateSum(GeomorphError):
    pass


class EmptyFilter(GeomorphError):
    pass


class BadAxis(GeomorphError):
    pass


class ConfigError(GeomorphError):
    pass


class ParadigmSyntaxError(GeomorphError):
    """Malformed line in a paradigm file; positions are 1-based"""

    def __init__(self, line, col, expected, source=None):
        self.line = line
        self.col = col
        self.expected = expected
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: expected {expected}")


class UndeclaredName(GeomorphError):
    def __init__(self, name, line, kind="value", source=None):
        self.name = name
        self.line = line
        self.kind = kind
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}: undeclared {kind} '{name}'")


class DuplicateDeclaration(GeomorphError):
    def __init__(self, name, line, source=None):
        self.name = name
        self.line = line
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}: '{name}' declared twice")
