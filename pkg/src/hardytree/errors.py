"""Exception hierarchy shared by all hardytree modules."""


class HardyTreeError(Exception):
    """Base class for every error raised by this package."""


class TreeError(HardyTreeError, ValueError):
    """Malformed tree, unknown vertex, or invalid structural argument."""


class CutError(TreeError):
    """A (D, Gamma) pair violates the cut invariants."""


class RegimeError(HardyTreeError, ValueError):
    """Exponents fall outside the regime an operation is defined for."""


class SizeLimitError(HardyTreeError):
    """An instance exceeds a configured enumeration or size cap."""


class ConvergenceError(HardyTreeError, RuntimeError):
    """An iterative solver exhausted its budget without meeting tolerance."""


class ParseError(HardyTreeError, ValueError):
    """Malformed tree file; ``line`` and ``column`` are 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "") if line else "input"
        super().__init__(f"{where}: {message}")
