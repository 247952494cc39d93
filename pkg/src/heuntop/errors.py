"""Exception types raised by the library."""


class DomainError(ValueError):
    """A mathematically invalid request (bad parameters, violated precondition)."""


class NotInvariantError(DomainError):
    """The polynomial space P_n is not preserved because L(n) != 0."""

    def __init__(self, n, lowering):
        super().__init__(f"not invariant: L({n}) = {lowering} != 0")
        self.n = n
        self.lowering = lowering


class FactorizationError(DomainError):
    """No sl(2) factorization exists under the beta_b = 1 normalization."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
