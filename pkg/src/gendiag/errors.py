"""Exception hierarchy shared by all gendiag modules."""


class GendiagError(Exception):
    """Base class for every error raised by this package."""


class MalformedInput(GendiagError, ValueError):
    pass


class NotABijection(MalformedInput):
    pass


class RepeatedElement(MalformedInput):
    pass


class OutOfRange(MalformedInput):
    pass


class DegreeMismatch(GendiagError, ValueError):
    pass


class DegreeTooLarge(GendiagError, ValueError):
    pass


class NotCertified(GendiagError):
    """Raised when a PSD-only check is handed a matrix that fails certification."""


class GenerationFailed(GendiagError, RuntimeError):
    pass


class NotIncomparable(GendiagError, ValueError):
    pass


class CaseSearchFailed(GendiagError, RuntimeError):
    """No (p, q) case applies although the pair is incomparable; indicates a bug."""


class WitnessNotFound(GendiagError, RuntimeError):
    """The epsilon schedule ran out before the strict inequalities held."""
