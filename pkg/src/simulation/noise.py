"""Unit-variance increment samplers and per-path random streams."""

import math

import numpy as np
from scipy import stats

from ..distributions.laws import student3_cdf
from ..errors import DomainError
from ..models import NoiseKind

# VG(1, sqrt 2) is the Laplace law with scale 1/sqrt(2).
LAPLACE_SCALE = 1.0 / math.sqrt(2.0)
STUDENT3_SCALE = 1.0 / math.sqrt(3.0)


def path_generator(seed: int, path_index: int) -> np.random.Generator:
    """Independent Philox stream for one path, derived from (seed, path_index)."""
    if seed < 0 or path_index < 0:
        raise DomainError("seed and path index must be non-negative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(path_index,))))


def sample_increments(noise: NoiseKind, rng: np.random.Generator, size) -> np.ndarray:
    """Draws from N(0,1), VG(1, sqrt 2) or T(3, 1), all with unit variance."""
    noise = NoiseKind(noise)
    if noise == NoiseKind.NORMAL01:
        return rng.standard_normal(size)
    if noise == NoiseKind.VG_1_SQRT2:
        return rng.laplace(0.0, LAPLACE_SCALE, size)
    return rng.standard_t(3.0, size) * STUDENT3_SCALE


def sample_increment(noise: NoiseKind, rng: np.random.Generator) -> float:
    """A single draw; see `sample_increments`."""
    return float(sample_increments(noise, rng, 1)[0])


def noise_cdf(noise: NoiseKind, x):
    """Analytic CDF of the increment law, for goodness-of-fit checks."""
    noise = NoiseKind(noise)
    if noise == NoiseKind.NORMAL01:
        return stats.norm.cdf(x)
    if noise == NoiseKind.VG_1_SQRT2:
        return stats.laplace.cdf(x, scale=LAPLACE_SCALE)
    return student3_cdf(x)
