"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid run configuration or input file (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical failure: non-convergence, corrupted spectra (CLI exit code 3)."""


class NonConvergenceError(NumericalError):
    """An iterative scheme failed to reach its accuracy target."""


class DegeneracyError(NumericalError):
    """Expected degenerate eigenvalue structure was not found."""
