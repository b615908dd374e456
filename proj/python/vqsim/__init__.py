"""Classical emulator of a hybrid variational quantum simulator."""

from ._core import (
    ConfigError,
    DegenerateSystemError,
    __version__,
    cost_estimate,
    default_trotter_grid,
    extrapolate,
    parse_config,
    run,
    run_trial,
    trace_distance,
    trotter_scan,
)

__all__ = [
    "ConfigError",
    "DegenerateSystemError",
    "__version__",
    "cost_estimate",
    "default_trotter_grid",
    "extrapolate",
    "parse_config",
    "run",
    "run_trial",
    "trace_distance",
    "trotter_scan",
]
