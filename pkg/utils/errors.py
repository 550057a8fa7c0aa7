"""
Error Types - Domain errors raised by the engine
All derive from ValueError so callers can catch them uniformly
"""


class UnsupportedGroupError(ValueError):
    """Unknown Coxeter type or unsupported rank"""


class ContextMismatchError(ValueError):
    """Elements or lattices from different group contexts were combined"""


class BudgetExceededError(ValueError):
    """A computation would exceed the configured group or lattice budget"""


class NotNoncrossingError(ValueError):
    """An element outside NC(W, c) was passed where a lattice element is required"""


class PeriodicOrbitError(ValueError):
    """The forward orbit never reaches the identity"""


class ElementParseError(ValueError):
    """An element specification could not be parsed"""


class FoldingError(ValueError):
    """Incompatible folding pair or a broken generator relation"""


class CacheFormatError(ValueError):
    """A cached lattice failed its header or checksum check"""
