"""Exception hierarchy shared by all modules."""


class SolvCheegerError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SolvCheegerError, ValueError):
    pass


class JacobiError(SolvCheegerError, ValueError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, triple, residual):
        self.triple = tuple(triple)
        self.residual = residual
        super().__init__(
            f"Jacobi identity fails on ({', '.join(self.triple)}): residual {residual}"
        )


class NotSolvable(SolvCheegerError, ValueError):
    pass


class NotPositiveDefinite(SolvCheegerError, ValueError):
    pass


class UnsupportedG0(SolvCheegerError, ValueError):
    """The normal subgroup G0 is not abelian or 2-step nilpotent."""


class QuadratureDomainError(SolvCheegerError, ValueError):
    pass


class ParseError(SolvCheegerError, ValueError):
    pass


class SweepDidNotConverge(SolvCheegerError):
    """Raised by ``equality_sweep``; carries the full table for inspection."""

    def __init__(self, message, result):
        self.result = result
        super().__init__(message)
