"""Python front end for the scmimo simulator."""

from ._core import (
    CSV_HEADER,
    ConfigError,
    NotPsdError,
    SingularChannelError,
    bessel_correlation,
    cmfp_rate_closed,
    cmfp_rate_limit,
    exponential_correlation,
    optimize_beta,
    run_suite,
    suite_names,
    sweep,
    sweep_csv,
)

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "NotPsdError",
    "SingularChannelError",
    "bessel_correlation",
    "cmfp_rate_closed",
    "cmfp_rate_limit",
    "exponential_correlation",
    "optimize_beta",
    "run_suite",
    "suite_names",
    "sweep",
    "sweep_csv",
]
