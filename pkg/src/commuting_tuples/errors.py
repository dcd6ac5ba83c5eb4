"""Exception hierarchy shared by every module of the package."""


class CommutingTuplesError(Exception):
    """Base class for all errors raised by this package."""


class NormError(CommutingTuplesError, ValueError):
    pass


class NoAxisError(CommutingTuplesError, ValueError):
    """Raised when an axis is requested for the identity rotation."""


class NonCommutingError(CommutingTuplesError, ValueError):
    pass


class AmbiguousError(CommutingTuplesError, ValueError):
    """Axis relations are neither colinear nor perpendicular within tolerance."""


class InvalidPatternError(CommutingTuplesError, ValueError):
    pass


class BoundError(CommutingTuplesError, ValueError):
    """Input size exceeds an enumeration or construction cap."""


class RangeError(CommutingTuplesError, ValueError):
    pass


class BudgetExceeded(CommutingTuplesError, RuntimeError):
    """Coset enumeration needed more cosets than allowed."""


class BoundaryError(CommutingTuplesError, ValueError):
    """A boundary composite is nonzero."""


class MissingAttachingWords(CommutingTuplesError, ValueError):
    pass


class NonUnitaryError(CommutingTuplesError, ValueError):
    pass


class ParseError(CommutingTuplesError, ValueError):
    pass
