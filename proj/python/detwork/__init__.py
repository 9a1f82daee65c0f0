"""Exact deterministic work extraction from many copies of a quantum state."""

from ._core import (
    DetworkError,
    InvalidSpectrum,
    ResourceLimitExceeded,
    Spectrum,
    beta_hat,
    binomial_rate_2level,
    bounded_fluctuation,
    brute_force_mdew,
    clt_estimate,
    dominates,
    eps_min,
    ergotropy_upper_bound,
    lattice,
    lcm_plan,
    lcm_protocol,
    lower_bounds,
    rate_n,
    rate_sweep,
    shell_counts,
    verify_protocol,
)

__all__ = [
    "DetworkError",
    "InvalidSpectrum",
    "ResourceLimitExceeded",
    "Spectrum",
    "beta_hat",
    "binomial_rate_2level",
    "bounded_fluctuation",
    "brute_force_mdew",
    "clt_estimate",
    "dominates",
    "eps_min",
    "ergotropy_upper_bound",
    "lattice",
    "lcm_plan",
    "lcm_protocol",
    "lower_bounds",
    "rate_n",
    "rate_sweep",
    "shell_counts",
    "verify_protocol",
]
