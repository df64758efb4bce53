"""Exception hierarchy. CLI exit codes are attached to the classes."""


class HopboltzError(Exception):
    exit_code = 1


class MaxStepsExceeded(HopboltzError):
    """No stable state was confirmed within the step budget."""

    exit_code = 2

    def __init__(self, max_steps, state=None):
        super().__init__(f"no stable state confirmed within {max_steps} updates")
        self.max_steps = max_steps
        self.state = state


class ConvergenceBoundViolation(HopboltzError):
    """Cyclic dynamics exceeded n * 2**n updates. Indicates a bug, never bad input."""

    exit_code = 2


class NoConvergence(HopboltzError):
    exit_code = 2

    def __init__(self, max_iter, width=None):
        msg = f"power iteration did not converge in {max_iter} iterations"
        if width is not None:
            msg += f" (bracket width {width:.3e})"
        super().__init__(msg)
        self.max_iter = max_iter
        self.width = width


class ScopeRejection(HopboltzError):
    """Input outside the supported setting (non-orthogonal patterns, reducible matrices)."""

    exit_code = 3


class NotIrreducible(ScopeRejection):
    pass


class NotUnique(ScopeRejection):
    """Stationary distribution is not unique (kernel of A - I has dimension > 1)."""


class NotStochastic(HopboltzError):
    pass


class SizeGuardError(HopboltzError):
    exit_code = 4


class TieSite(HopboltzError):
    """Local field is exactly zero; the zero-temperature Gibbs limit is 1/2 there."""
