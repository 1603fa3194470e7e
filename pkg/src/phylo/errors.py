"""Exception types shared across the package."""


class PhyloError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PhyloError, ValueError):
    """Syntax error in a formula, Newick string, or instance file.

    ``line`` and ``column`` are 1-based; ``line`` is 1 for single-line inputs.
    """

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class CapExceeded(PhyloError):
    """A brute-force routine was asked to handle more variables than its cap."""

    def __init__(self, what, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} variables exceeds cap of {cap}")


class NotTame(PhyloError):
    """The solver was given a clause outside the tame class."""

    def __init__(self, clause_index):
        self.clause_index = clause_index
        super().__init__(f"clause {clause_index} is not tame")


class UnmappedVariable(PhyloError, KeyError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"variable {variable!r} has no leaf in the assignment")

    def __str__(self):
        return self.args[0]


class DoubleDelete(PhyloError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge} was already deleted")


class GraphViolation(PhyloError):
    """A catalog graph failed validation; ``prop`` names the failed property."""

    def __init__(self, prop, detail):
        self.prop = prop
        super().__init__(f"{prop}: {detail}")


class NotFound(PhyloError):
    pass
