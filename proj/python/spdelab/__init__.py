"""Lattice laboratory for stochastic heat and wave equations driven by
spatially homogeneous Gaussian noise.

Everything is implemented in the C++ core; this package re-exports the
bindings."""

from spdelab._core import (
    Measure,
    Solution,
    certify_gamma,
    config_hash,
    estimate_density,
    fit_envelope,
    ks_against_normal,
    phi,
    phi_profile,
    psi,
    run_ensemble,
    tail_decay,
    truncated_phi,
    two_sided,
    verify_envelope,
    window_scaling,
)

__all__ = [
    "Measure",
    "Solution",
    "certify_gamma",
    "config_hash",
    "estimate_density",
    "fit_envelope",
    "ks_against_normal",
    "phi",
    "phi_profile",
    "psi",
    "run_ensemble",
    "tail_decay",
    "truncated_phi",
    "two_sided",
    "verify_envelope",
    "window_scaling",
]

__version__ = "0.1.0"
