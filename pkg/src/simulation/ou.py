"""Euler scheme for OU-type processes driven by Gaussian or pure-jump Levy noise.

Y_{m+1} = Y_m + alpha(Y_m) dtau + dX_m with alpha(y) = -k y, optionally acting
only inside |y| <= q. Every path draws from its own stream, so results do not
depend on batching or on the number of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..config import config
from ..errors import DomainError
from ..models import EscapeStats, ForceSpec, NoiseKind, Table
from .noise import path_generator, sample_increments

logger = logging.getLogger(__name__)

# Steps drawn per path at a time inside a batch.
_STEP_CHUNK = 1000


@dataclass
class TrajectoryRecord:
    """One simulated path Y_0..Y_steps."""
    seed: int
    noise: NoiseKind
    force: ForceSpec
    steps: int
    dtau: float
    values: np.ndarray
    escapes: list[int] = field(default_factory=list)
    path_index: int = 0

    def __post_init__(self):
        if self.values.shape != (self.steps + 1,):
            raise DomainError(f"expected {self.steps + 1} values, got {self.values.shape}")

    def to_table(self) -> Table:
        return Table(header=["step", "y"], rows=list(zip(range(self.steps + 1), self.values.tolist())))


def _check_step(noise: NoiseKind, dtau: float) -> float:
    if not math.isfinite(dtau) or dtau <= 0:
        raise DomainError(f"time step must be positive, got {dtau}")
    if dtau != 1.0 and NoiseKind(noise) != NoiseKind.NORMAL01:
        # VG and Student laws are not closed under rescaling of time
        raise DomainError(f"{NoiseKind(noise).value} noise is only defined at dtau = 1, got {dtau}")
    return float(dtau)


def _check_counts(**counts: int) -> None:
    for name, value in counts.items():
        if int(value) != value or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value}")


def euler_path(y0: float, increments: np.ndarray, force: ForceSpec, dtau: float = 1.0) -> np.ndarray:
    """Deterministic recursion for given increments; values[0] = y0."""
    increments = np.asarray(increments, dtype=float)
    values = np.empty(increments.size + 1)
    values[0] = y = float(y0)
    for m, dx in enumerate(increments):
        y = y + float(force.drift(y)) * dtau + dx
        values[m + 1] = y
    return values


def outward_crossings(values: np.ndarray, q: float) -> list[int]:
    """Steps m >= 1 where |Y_m| > q while |Y_{m-1}| <= q."""
    outside = np.abs(values) > q
    return (np.flatnonzero(outside[1:] & ~outside[:-1]) + 1).tolist()


def ou_path(
    noise: NoiseKind,
    force: ForceSpec,
    steps: int,
    y0: float = 0.0,
    seed: Optional[int] = None,
    dtau: float = 1.0,
    path_index: int = 0,
) -> TrajectoryRecord:
    """A single path; escapes are recorded when the force has a cutoff q."""
    _check_counts(steps=steps)
    dtau = _check_step(noise, dtau)
    seed = config.simulation.seed if seed is None else seed
    rng = path_generator(seed, path_index)
    increments = sample_increments(noise, rng, steps) * math.sqrt(dtau)
    values = euler_path(y0, increments, force, dtau)
    escapes = outward_crossings(values, force.q) if force.q is not None else []
    return TrajectoryRecord(
        seed=seed,
        noise=NoiseKind(noise),
        force=force,
        steps=steps,
        dtau=dtau,
        values=values,
        escapes=escapes,
        path_index=path_index,
    )


def _escape_batch(
    noise: NoiseKind, force: ForceSpec, steps: int, y0: float, seed: int, indices: range
) -> tuple[int, int]:
    """(number of escaped paths, sum of their first escape steps) for one batch."""
    rngs = [path_generator(seed, i) for i in indices]
    y = np.full(len(rngs), float(y0))
    first = np.zeros(len(rngs), dtype=np.int64)
    for start in range(0, steps, _STEP_CHUNK):
        width = min(_STEP_CHUNK, steps - start)
        increments = np.stack([sample_increments(noise, rng, width) for rng in rngs])
        for j in range(width):
            y = y + force.drift(y) + increments[:, j]
            newly = (first == 0) & (np.abs(y) > force.q)
            first[newly] = start + j + 1
    escaped = first > 0
    return int(escaped.sum()), int(first[escaped].sum())


def escape_stats(
    noise: NoiseKind,
    k: float,
    q: float,
    n_paths: int,
    steps: int,
    seed: Optional[int] = None,
    y0: float = 0.0,
    workers: Optional[int] = None,
) -> EscapeStats:
    """Fraction of cutoff-force paths with some |Y_m| > q, and their mean first-escape step."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    _check_counts(n_paths=n_paths, steps=steps)
    seed = config.simulation.seed if seed is None else seed
    force = ForceSpec(k=k, q=q)
    size = config.simulation.batch_size
    batches = [range(lo, min(lo + size, n_paths)) for lo in range(0, n_paths, size)]
    workers = min(workers or config.worker_count(), len(batches))

    def run(batch: range) -> tuple[int, int]:
        result = _escape_batch(noise, force, steps, y0, seed, batch)
        logger.info("escape_stats %s: paths %d-%d done", NoiseKind(noise).value, batch.start, batch.stop - 1)
        return result

    if workers <= 1:
        results = [run(b) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, batches))

    escaped = sum(r[0] for r in results)
    first_total = sum(r[1] for r in results)
    return EscapeStats(
        noise=NoiseKind(noise),
        k=k,
        q=q,
        n_paths=n_paths,
        steps=steps,
        escape_fraction=escaped / n_paths,
        mean_first_escape=first_total / escaped if escaped else None,
        seed=seed,
    )


def stationary_std(k: float) -> float:
    """Stationary standard deviation of the Euler recursion with unit-variance noise."""
    if not 0 < k < 2:
        raise DomainError(f"k must lie in (0, 2) for a stationary recursion, got {k}")
    return 1.0 / math.sqrt(1.0 - (1.0 - k) ** 2)


def excursion_count(record: TrajectoryRecord, level: float) -> int:
    """Number of steps with |Y_m| > level."""
    return int(np.count_nonzero(np.abs(record.values[1:]) > level))


def free_path_moments(
    noise: NoiseKind,
    steps: int,
    n_paths: int,
    seed: Optional[int] = None,
    at_steps: Optional[Sequence[int]] = None,
) -> dict[int, float]:
    """Sample variance of free (k = 0) paths at the requested steps."""
    _check_counts(steps=steps, n_paths=n_paths)
    seed = config.simulation.seed if seed is None else seed
    at_steps = list(at_steps or [steps])
    if any(not 1 <= m <= steps for m in at_steps):
        raise DomainError(f"requested steps must lie in [1, {steps}]")
    columns = np.asarray(at_steps) - 1
    positions = np.empty((n_paths, len(at_steps)))
    for i in range(n_paths):
        walk = np.cumsum(sample_increments(noise, path_generator(seed, i), steps))
        positions[i] = walk[columns]
    variances = positions.var(axis=0, ddof=1)
    return {m: float(v) for m, v in zip(at_steps, variances)}


def lag_autocorrelation(values: np.ndarray, lag: int = 1) -> float:
    """Sample autocorrelation of a sequence at the given lag."""
    values = np.asarray(values, dtype=float)
    if int(lag) != lag or not 1 <= lag < values.size - 1:
        raise DomainError(f"lag must be an integer in [1, {values.size - 2}], got {lag}")
    return float(np.corrcoef(values[:-lag], values[lag:])[0, 1])


def figure3_paths(
    seed: Optional[int] = None,
    steps: Optional[int] = None,
    k: Optional[float] = None,
    q: Optional[float] = None,
) -> Table:
    """Normal, VG and Student OU paths, plus a Student path with cutoff force."""
    sim = config.simulation
    seed = sim.seed if seed is None else seed
    steps = steps or sim.steps
    k = sim.k if k is None else k
    q = q or sim.q
    runs = [
        (NoiseKind.NORMAL01, ForceSpec(k=k)),
        (NoiseKind.VG_1_SQRT2, ForceSpec(k=k)),
        (NoiseKind.STUDENT3_1, ForceSpec(k=k)),
        (NoiseKind.STUDENT3_1, ForceSpec(k=k, q=q)),
    ]
    columns = [ou_path(noise, force, steps, seed=seed, path_index=i).values for i, (noise, force) in enumerate(runs)]
    rows = [(m, *(float(c[m]) for c in columns)) for m in range(steps + 1)]
    return Table(header=["step", "normal", "vg", "student", "student_cutoff"], rows=rows)
