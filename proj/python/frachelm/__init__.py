"""Forward and inverse scattering for the nonlinear fractional Helmholtz equation."""

from ._core import (
    acceptance_criterion_count,
    fourier_at,
    frac_laplacian,
    lp_norm,
    make_probe,
    phi1,
    phi_s,
    plane_wave_on_grid,
    reconstruct,
    run_acceptance_criterion,
    s3_kernel,
    scattering_amplitude,
    solve,
    stock_potential,
)

__version__ = "0.1.0"

__all__ = [
    "acceptance_criterion_count",
    "fourier_at",
    "frac_laplacian",
    "lp_norm",
    "make_probe",
    "phi1",
    "phi_s",
    "plane_wave_on_grid",
    "reconstruct",
    "run_acceptance_criterion",
    "s3_kernel",
    "scattering_amplitude",
    "solve",
    "stock_potential",
]
