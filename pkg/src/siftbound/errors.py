"""Exception classes shared across modules."""


class SiftboundError(Exception):
    pass


class CapacityError(SiftboundError):
    """Input outside the arithmetic range the module supports."""


class DomainError(SiftboundError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class DataGatedError(SiftboundError):
    """An external data file (zero table, hint file) is required but absent."""


class VerificationError(SiftboundError):
    """A computed quantity failed the inequality it is supposed to satisfy."""
