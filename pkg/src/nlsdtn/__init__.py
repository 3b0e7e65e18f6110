"""Dirichlet-to-Neumann maps for the cubic Schrodinger equation on an interval.

Computes the unknown boundary traces of i q_t + q_xx - 2 lam |q|^2 q = 0 on
[0, L] with q(x, 0) = 0 from the known ones, via contour-deformed trace
representations, a perturbative series, and an equivalent kernel-transform
route, cross-validated against independent finite-difference and sine-series
solvers.
"""

from .core import (
    AsymptoticCoeffs,
    BoundaryData,
    ProblemConfig,
    TimeSeries,
    asymptotic_coeffs,
    check_compatibility,
    make_time_grid,
    preset_functions,
    preset_series,
    read_timeseries_csv,
    write_timeseries_csv,
)

__all__ = [
    "AsymptoticCoeffs",
    "BoundaryData",
    "ProblemConfig",
    "TimeSeries",
    "asymptotic_coeffs",
    "check_compatibility",
    "make_time_grid",
    "preset_functions",
    "preset_series",
    "read_timeseries_csv",
    "write_timeseries_csv",
]

__version__ = "0.1.0"
