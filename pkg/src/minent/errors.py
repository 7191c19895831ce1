"""Exception types shared across the package."""


class MinentError(Exception):
    """Base class for every error raised by this package."""


class Unsupported(MinentError):
    """No word-problem backend can canonicalize the group at hand."""


class BudgetExceeded(MinentError):
    """An enumeration exceeded its configured state cap."""


class NotSmallCancellation(MinentError):
    pass


class NonRealizable(MinentError):
    """Edge lengths do not define a Euclidean simplex."""


class EmptyFiber(MinentError):
    pass


class Disconnected(MinentError):
    pass


class MismatchedGenerators(MinentError):
    pass


class DimensionTooHigh(MinentError):
    pass


class InvalidSpec(MinentError):
    pass
