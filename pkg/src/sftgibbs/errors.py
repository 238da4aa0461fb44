"""Exception types shared across the package."""


class SftgibbsError(Exception):
    """Base class for all package errors."""


class BadShape(SftgibbsError):
    """Transition matrix is not a square 0/1 matrix."""


class ZeroRow(SftgibbsError):
    """A symbol has no successor; bi-infinite sequences cannot pass through it."""

    def __init__(self, row):
        super().__init__(f"transition row {row} is all zero (symbol {row} has no successor)")
        self.row = row


class ZeroColumn(SftgibbsError):
    """A symbol has no predecessor."""

    def __init__(self, column):
        super().__init__(f"transition column {column} is all zero (symbol {column} has no predecessor)")
        self.column = column


class SymbolOutOfRange(SftgibbsError):
    """A symbol index lies outside 0..n-1."""


class NotMixing(SftgibbsError):
    """Operation requires a topologically mixing (primitive) model."""


class KTooSmall(SftgibbsError):
    """Block distance k below the co-occurrence threshold."""


class BadParameters(SftgibbsError):
    """Swap-involution parameters must satisfy 1 <= k < P."""


class WindowTooSmall(SftgibbsError):
    """A window does not cover the coordinates an operation needs."""


class RangeMismatch(SftgibbsError):
    """Potential value table is malformed for its model/range."""


class BadAlpha(SftgibbsError):
    """Decay rate must lie strictly between 0 and 1."""


class NoConvergence(SftgibbsError):
    """Iterative eigensolver exceeded its iteration cap."""

    def __init__(self, iterations):
        super().__init__(f"no convergence after {iterations} iterations")
        self.iterations = iterations


class NullCylinder(SftgibbsError):
    """Ratio requested against a measure-zero cylinder."""


class NotInvolution(SftgibbsError):
    """Operation is defined for involutions only."""


class BadSupport(SftgibbsError):
    """Past/future cylinders must live on the expected side of the origin."""


class ParseError(SftgibbsError):
    """Model or potential file rejected."""

    def __init__(self, reason, line=None):
        loc = f"line {line}: " if line is not None else ""
        super().__init__(f"{loc}{reason}")
        self.line = line
        self.reason = reason
