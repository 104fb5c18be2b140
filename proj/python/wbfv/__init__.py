"""Well-balanced implicit and semi-implicit finite volume solvers for 1D balance laws."""

from ._core import (
    ConfigError,
    ConvergenceError,
    IoError,
    StateError,
    __version__,
    case_names,
    l1_error,
    observed_order,
    run,
    steady,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "IoError",
    "StateError",
    "__version__",
    "case_names",
    "l1_error",
    "observed_order",
    "run",
    "steady",
]
