"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to meet its tolerance (CLI exit code 3)."""
