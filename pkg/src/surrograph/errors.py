"""Exception types shared across the package."""


class SurrographError(Exception):
    """Base class for all package errors."""


class InputError(SurrographError):
    """Invalid user input: malformed files, bad arguments, broken invariants.

    The CLI maps this to exit status 1.
    """


class NonConvergenceError(SurrographError):
    """A statistical procedure failed to converge (tuning tolerance unmet,
    regression separation). The CLI maps this to exit status 2; partial
    outputs are still written where possible.
    """
