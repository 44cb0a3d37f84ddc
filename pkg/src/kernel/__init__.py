"""Numerical kernel: special functions and quadrature rules."""

from .specfun import (
    auxiliary_f,
    auxiliary_f_complement,
    bessel_k,
    bessel_k_half,
    beta,
    cos_integral,
    log_bessel_k,
    log_gamma,
    scaled_upper_gamma,
    sin_integral,
    upper_gamma_complex,
)

__all__ = [
    "auxiliary_f",
    "auxiliary_f_complement",
    "bessel_k",
    "bessel_k_half",
    "beta",
    "cos_integral",
    "log_bessel_k",
    "log_gamma",
    "scaled_upper_gamma",
    "sin_integral",
    "upper_gamma_complex",
]
