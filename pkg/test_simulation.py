"""
Simulation Tests for Levy Mixtures

Tests:
1. Increment samplers: moments and goodness of fit
2. Euler recursion, step-size rules and path records
3. Escape statistics: limits, ordering and reproducibility
4. Free-path variance, autocorrelation and excursions
"""

import math

import numpy as np
import pytest
from dotenv import load_dotenv
from scipy import stats

load_dotenv()

from src.config import config
from src.errors import DomainError
from src.models import ForceSpec, NoiseKind
from src.simulation import noise, ou


def test_sampler_moments():
    """Zero mean and unit variance at N = 1e6."""
    print("\n" + "=" * 60)
    print("TEST 1: Increment samplers")
    print("=" * 60)

    size = 1_000_000
    for kind, kurtosis in ((NoiseKind.NORMAL01, 3.0), (NoiseKind.VG_1_SQRT2, 6.0)):
        draws = noise.sample_increments(kind, noise.path_generator(7, 0), size)
        print(f"  {kind.value}: mean {draws.mean():.2e}, var {draws.var():.5f}")
        assert abs(draws.mean()) <= 3.0 / math.sqrt(size)
        assert abs(draws.var() - 1.0) <= 3.0 * math.sqrt((kurtosis - 1.0) / size)

    # infinite kurtosis: only a loose variance band is meaningful
    draws = noise.sample_increments(NoiseKind.STUDENT3_1, noise.path_generator(7, 0), size)
    assert abs(draws.mean()) <= 3.0 / math.sqrt(size)
    assert abs(draws.var() - 1.0) <= 0.2

    single = noise.sample_increment(NoiseKind.NORMAL01, noise.path_generator(7, 0))
    assert single == noise.sample_increments(NoiseKind.NORMAL01, noise.path_generator(7, 0), 1)[0]


def test_sampler_goodness_of_fit():
    """Kolmogorov-Smirnov against the analytic CDFs."""
    size = 100_000
    for kind in (NoiseKind.STUDENT3_1, NoiseKind.VG_1_SQRT2):
        draws = noise.sample_increments(kind, noise.path_generator(11, 3), size)
        statistic = stats.kstest(draws, lambda x, kind=kind: noise.noise_cdf(kind, x)).statistic
        print(f"  {kind.value}: KS {statistic:.4f}")
        assert statistic <= 1.95 / math.sqrt(size)

    with pytest.raises(DomainError):
        noise.path_generator(-1, 0)


def test_euler_recursion():
    """With zero noise the path decays geometrically."""
    print("\n" + "=" * 60)
    print("TEST 2: Euler recursion and paths")
    print("=" * 60)

    values = ou.euler_path(10.0, np.zeros(50), ForceSpec(k=0.1))
    assert np.allclose(values, 10.0 * 0.9 ** np.arange(51), rtol=1e-12, atol=0)

    # cutoff force: no pull outside |y| <= q
    values = ou.euler_path(10.0, np.zeros(5), ForceSpec(k=0.1, q=5.0))
    assert np.all(values == 10.0)

    assert ou.outward_crossings(np.array([0.0, 3.0, 0.5, -4.0, -5.0, 1.0]), 2.0) == [1, 3]


def test_step_size_rules():
    """Only Gaussian noise may use a step other than 1."""
    force = ForceSpec(k=0.1)
    ou.ou_path(NoiseKind.NORMAL01, force, 10, seed=1, dtau=0.5)
    for kind in (NoiseKind.VG_1_SQRT2, NoiseKind.STUDENT3_1):
        with pytest.raises(DomainError):
            ou.ou_path(kind, force, 10, seed=1, dtau=0.5)
    with pytest.raises(DomainError):
        ou.ou_path(NoiseKind.NORMAL01, force, 10, seed=1, dtau=0.0)
    with pytest.raises(DomainError):
        ou.ou_path(NoiseKind.NORMAL01, force, 0, seed=1)


def test_path_records():
    """Paths are reproducible per (seed, path index) and serialise to tables."""
    force = ForceSpec(k=0.1, q=3.0)
    a = ou.ou_path(NoiseKind.STUDENT3_1, force, 500, seed=42)
    b = ou.ou_path(NoiseKind.STUDENT3_1, force, 500, seed=42)
    c = ou.ou_path(NoiseKind.STUDENT3_1, force, 500, seed=42, path_index=1)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert a.escapes == ou.outward_crossings(a.values, 3.0)

    table = a.to_table()
    assert table.header == ["step", "y"]
    assert len(table.rows) == 501
    assert table.rows[0] == (0, 0.0)

    with pytest.raises(DomainError):
        ou.TrajectoryRecord(1, NoiseKind.NORMAL01, force, 3, 1.0, np.zeros(3))

    fig = ou.figure3_paths(seed=5, steps=200)
    assert fig.header == ["step", "normal", "vg", "student", "student_cutoff"]
    assert len(fig.rows) == 201
    assert fig.rows[0] == (0, 0.0, 0.0, 0.0, 0.0)
    cutoff = ou.ou_path(
        NoiseKind.STUDENT3_1, ForceSpec(k=config.simulation.k, q=config.simulation.q), 200, seed=5, path_index=3
    )
    assert [row[4] for row in fig.rows] == cutoff.values.tolist()


def test_escape_limits():
    """A tiny cutoff is left at step 1, a huge one never."""
    print("\n" + "=" * 60)
    print("TEST 3: Escape statistics")
    print("=" * 60)

    tiny = ou.escape_stats(NoiseKind.NORMAL01, 0.1, 1e-9, 100, 10, seed=3)
    assert tiny.escape_fraction == 1.0
    assert tiny.mean_first_escape == 1.0

    huge = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 1e9, 100, 10, seed=3)
    assert huge.escape_fraction == 0.0
    assert huge.mean_first_escape is None

    with pytest.raises(DomainError):
        ou.escape_stats(NoiseKind.NORMAL01, 0.1, 0.0, 10, 10)


def test_escape_ordering():
    """Normal < VG < Student escape fractions at the default cutoff."""
    q = config.simulation.q
    n_paths = 2000
    fractions = [ou.escape_stats(kind, 0.1, q, n_paths, 5000, seed=2024).escape_fraction for kind in NoiseKind]
    print(f"  q={q}: fractions {fractions}")
    assert q == 8.0
    for low, high in zip(fractions, fractions[1:]):
        sd = math.sqrt((low * (1 - low) + high * (1 - high)) / n_paths)
        assert high - low > 3.0 * sd, (low, high, sd)


def test_escape_reproducible_across_workers(monkeypatch):
    """Batching and thread count do not change the result."""
    monkeypatch.setattr(config.simulation, "batch_size", 64)
    one = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 6.0, 300, 400, seed=9, workers=1)
    many = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 6.0, 300, 400, seed=9, workers=4)
    assert one == many

    monkeypatch.setattr(config.simulation, "batch_size", 1000)
    single_batch = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 6.0, 300, 400, seed=9)
    assert single_batch == one
    assert one.escape_fraction > 0


def test_free_path_variance():
    """Var(Y_m) = m for free paths with unit-variance noise."""
    print("\n" + "=" * 60)
    print("TEST 4: Free paths, autocorrelation, excursions")
    print("=" * 60)

    for kind in (NoiseKind.NORMAL01, NoiseKind.VG_1_SQRT2):
        variances = ou.free_path_moments(kind, 1000, 2000, seed=17, at_steps=[250, 1000])
        print(f"  {kind.value}: {variances}")
        for m, v in variances.items():
            assert v == pytest.approx(m, rel=0.15)

    # finite variance but infinite kurtosis: the sample variance settles slowly
    variances = ou.free_path_moments(NoiseKind.STUDENT3_1, 1000, 2000, seed=17, at_steps=[250, 1000])
    print(f"  student3_1: {variances}")
    for m, v in variances.items():
        assert v == pytest.approx(m, rel=0.3)

    with pytest.raises(DomainError):
        ou.free_path_moments(NoiseKind.NORMAL01, 10, 5, at_steps=[11])


def test_autocorrelation():
    """Independent increments and the 1 - k memory of the OU recursion."""
    size = 100_000
    for kind in (NoiseKind.NORMAL01, NoiseKind.VG_1_SQRT2):
        draws = noise.sample_increments(kind, noise.path_generator(23, 0), size)
        assert abs(ou.lag_autocorrelation(draws, 1)) <= 4.0 / math.sqrt(size)

    path = ou.ou_path(NoiseKind.NORMAL01, ForceSpec(k=0.1), 50_000, seed=23)
    assert ou.lag_autocorrelation(path.values, 1) == pytest.approx(0.9, abs=0.02)
    assert path.values.std() == pytest.approx(ou.stationary_std(0.1), rel=0.05)

    with pytest.raises(DomainError):
        ou.lag_autocorrelation(np.zeros(3), 2)
    with pytest.raises(DomainError):
        ou.stationary_std(2.0)


def test_excursions():
    """Student noise produces far more large excursions than Gaussian noise."""
    level = 6.0 * ou.stationary_std(0.1)
    counts = {}
    for kind in (NoiseKind.NORMAL01, NoiseKind.STUDENT3_1):
        record = ou.ou_path(kind, ForceSpec(k=0.1), 50_000, seed=31)
        counts[kind] = ou.excursion_count(record, level)
    print(f"  steps beyond {level:.2f}: {counts}")
    assert counts[NoiseKind.STUDENT3_1] > counts[NoiseKind.NORMAL01]


if __name__ == "__main__":
    test_sampler_moments()
    test_sampler_goodness_of_fit()
    test_euler_recursion()
    test_step_size_rules()
    test_path_records()
    test_escape_limits()
    test_escape_ordering()
    test_free_path_variance()
    test_autocorrelation()
    test_excursions()
    print("\nAll simulation tests passed.")
