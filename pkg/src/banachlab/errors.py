"""Exception types shared across the package."""


class BanachLabError(Exception):
    """Base class; ``details`` is a JSON-serializable mapping."""

    kind = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"error": self.kind, "message": str(self)}
        out.update(self.details)
        return out


class DimensionError(BanachLabError, ValueError):
    kind = "dimension"


class CapacityError(BanachLabError, ValueError):
    kind = "capacity"


class PreconditionError(BanachLabError, ValueError):
    kind = "precondition"


class ConstructionError(BanachLabError, RuntimeError):
    kind = "construction"


class NonConvergenceError(BanachLabError, RuntimeError):
    """Raised by iterative solvers; carries the bounds reached so far."""

    kind = "nonconvergence"

    def __init__(self, message, lower=None, upper=None, **details):
        super().__init__(message, lower=lower, upper=upper, **details)
        self.lower = lower
        self.upper = upper
