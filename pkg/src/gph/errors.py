"""Exception hierarchy shared by all gph modules."""


class GphError(Exception):
    pass


class InvalidGraph(GphError, ValueError):
    pass


class InvalidMorphism(GphError, ValueError):
    pass


class MismatchError(GphError, ValueError):
    """Raised when morphisms that must share a domain or codomain do not."""


class PreconditionError(GphError, ValueError):
    pass


class InternalConsistencyError(GphError, AssertionError):
    """Two independent computations disagreed; this is always a bug."""


class BudgetExhausted(GphError):
    pass


class ReplayMismatch(GphError):
    pass
