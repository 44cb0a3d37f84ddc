"""OU-type path simulation driven by unit-variance Levy noises."""

from .noise import noise_cdf, path_generator, sample_increment, sample_increments
from .ou import (
    TrajectoryRecord,
    escape_stats,
    euler_path,
    excursion_count,
    figure3_paths,
    free_path_moments,
    lag_autocorrelation,
    ou_path,
    stationary_std,
)

__all__ = [
    "noise_cdf",
    "path_generator",
    "sample_increment",
    "sample_increments",
    "TrajectoryRecord",
    "escape_stats",
    "euler_path",
    "excursion_count",
    "figure3_paths",
    "free_path_moments",
    "lag_autocorrelation",
    "ou_path",
    "stationary_std",
]
