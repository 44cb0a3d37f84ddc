"""Transition laws of VG and Student processes.

Internally everything is in reduced units (alpha = 1, delta = 1, T = 1);
`process_pdf` and `transition_chf` take a ProcessSpec and map user units in
and out.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special

from ..config import config
from ..errors import DomainError, NumericFailure, SingularityError
from ..kernel.quadrature import checked_quad, cosine_transform, evaluate_on, fourier_tail, gauss_legendre_panels
from ..kernel.specfun import as_output, scaled_upper_gamma
from ..models import CauchyParams, NormalParams, ProcessSpec, SmallXRegime, StudentParams, Table, VGParams
from .laws import cauchy_pdf, law_chf, normal_pdf, vg_pdf

logger = logging.getLogger(__name__)


@dataclass
class GridFunction:
    """Values of a function on a strictly increasing grid."""
    xs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.xs.shape != self.values.shape or self.xs.ndim != 1:
            raise DomainError("grid and values must be one-dimensional and of equal length")
        if self.xs.size > 1 and not np.all(np.diff(self.xs) > 0):
            raise DomainError("grid must be strictly increasing")

    def to_table(self, x_name: str = "x", value_name: str = "value") -> Table:
        return Table(header=[x_name, value_name], rows=list(zip(self.xs.tolist(), self.values.tolist())))


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value}")
    return value


# ---------------------------------------------------------------------------
# Characteristic functions and the inversion oracle
# ---------------------------------------------------------------------------


def transition_chf(spec: ProcessSpec, u, dt: float):
    """[phi(u)]^(dt/T) for the generating law of `spec`."""
    dt = _require_positive("dt", dt)
    phi = np.asarray(law_chf(spec.law, u), dtype=float)
    return as_output(np.power(phi, dt / spec.time_scale), u)


def default_truncation(chf: Callable) -> float:
    """Smallest power-of-two M with |chf(M)| below the floor, capped at max_truncation."""
    num = config.numerics
    m = 8.0
    while m < num.max_truncation and abs(float(np.asarray(evaluate_on(chf, np.array([m])))[0])) >= num.chf_floor:
        m *= 2.0
    return min(m, num.max_truncation)


def _panel_estimate(chf: Callable, xs: np.ndarray, m: float, panels: int) -> np.ndarray:
    nodes, weights = gauss_legendre_panels(0.0, m, panels, config.numerics.gl_nodes)
    return cosine_transform(evaluate_on(chf, nodes), nodes, weights, xs)


def invert_chf(
    chf: Callable,
    xs,
    truncation_m: Optional[float] = None,
    panels: Optional[int] = None,
) -> GridFunction:
    """(1/pi) int_0^inf cos(u x) chf(u) du on the grid xs, for a real even chf.

    Panel-wise Gauss-Legendre on [0, M], checked against a run with twice as
    many panels. When chf(M) is still above the floor, the remaining tail is
    added with QUADPACK's Fourier-integral rule.

    Args:
        chf: Real even characteristic function (vectorised or scalar).
        xs: Strictly increasing grid.
        truncation_m: Truncation point M; chosen from the chf decay when omitted.
        panels: Starting panel count; chosen from M and max|x| when omitted.

    Returns:
        GridFunction with the recovered density.
    """
    num = config.numerics
    xs = np.asarray(xs, dtype=float)
    GridFunction(xs, np.zeros_like(xs))  # validates the grid

    m = float(truncation_m) if truncation_m else default_truncation(chf)
    x_max = float(np.max(np.abs(xs))) if xs.size else 0.0
    if panels is None:
        panels = max(num.min_panels, math.ceil(m), math.ceil(m * x_max / 8.0))

    coarse = _panel_estimate(chf, xs, m, panels)
    while True:
        fine = _panel_estimate(chf, xs, m, 2 * panels)
        err = float(np.max(np.abs(fine - coarse))) if xs.size else 0.0
        scale = float(np.max(np.abs(fine))) if xs.size else 0.0
        if err <= num.inversion_atol + num.inversion_rtol * scale:
            break
        if 4 * panels > num.max_panels:
            raise NumericFailure(
                f"Fourier inversion did not settle with {2 * panels} panels on [0, {m}]",
                worst_estimate=err,
            )
        panels *= 2
        coarse = fine

    values = fine
    if abs(float(evaluate_on(chf, np.array([m]))[0])) >= num.chf_floor:
        logger.debug("invert_chf: adding oscillatory tail beyond M=%s", m)
        scalar_chf = lambda u: float(evaluate_on(chf, np.array([u]))[0])  # noqa: E731
        tails = np.array([fourier_tail(scalar_chf, m, float(x), "cos") for x in xs])
        values = values + tails

    return GridFunction(xs, values / math.pi)


def gaussian_limit_distance(t: float, u_grid) -> float:
    """sup over the grid of |[phi(u/sqrt t | 3)]^t - exp(-u^2/2)|."""
    t = _require_positive("t", t)
    u = np.abs(np.asarray(u_grid, dtype=float)) / math.sqrt(t)
    scaled = np.exp(t * (np.log1p(u) - u))
    gauss = np.exp(-0.5 * np.asarray(u_grid, dtype=float) ** 2)
    return float(np.max(np.abs(scaled - gauss)))


# ---------------------------------------------------------------------------
# Variance Gamma process
# ---------------------------------------------------------------------------


def vg_small_x_regime(lam: float, t: float) -> SmallXRegime:
    """Near-origin behaviour of p(x, t) for a VG(lam, 1) process."""
    product = 2.0 * _require_positive("lam", lam) * _require_positive("t", t)
    if math.isclose(product, 1.0, rel_tol=1e-12):
        return SmallXRegime.LOG_SINGULAR
    if product < 1.0:
        return SmallXRegime.SINGULAR
    return SmallXRegime.FINITE


def vg_origin_value(lam: float, t: float) -> float:
    """p(0, t) = Gamma(lam t - 1/2) / (2 sqrt(pi) Gamma(lam t)) in the finite regime."""
    if vg_small_x_regime(lam, t) != SmallXRegime.FINITE:
        raise SingularityError(f"VG transition pdf with lam*t={lam * t} diverges at x=0")
    lt = lam * t
    return math.exp(special.gammaln(lt - 0.5) - special.gammaln(lt)) / (2.0 * math.sqrt(math.pi))


def vg_tail_exponent(lam: float, t: float) -> float:
    """Power q in p(x, t) ~ |x|^q e^{-|x|} for large |x|."""
    return _require_positive("lam", lam) * _require_positive("t", t) - 1.0


def vg_transition_pdf(lam: float, x, t: float):
    """p(x, t) for the reduced VG(lam, 1) process: a VG(lam t, 1) density."""
    lam = _require_positive("lam", lam)
    t = _require_positive("t", t)
    return vg_pdf(VGParams(lam=lam * t, alpha=1.0), x)


# ---------------------------------------------------------------------------
# Student T(3) process
# ---------------------------------------------------------------------------


def _student3_closed_form(x: float, t: float) -> float:
    # e^z z^-(t+1) Gamma(t+1, z) / pi at z = t + i|x|
    return scaled_upper_gamma(t + 1.0, complex(t, abs(x))).real / math.pi


def _student3_direct(x: float, t: float) -> float:
    """(1/pi) int_0^inf cos(u x) e^{-t u} (1+u)^t du for large t."""
    upper = 1.0
    while t * (upper - math.log1p(upper)) < 750.0:
        upper *= 2.0
    integrand = lambda u: math.exp(t * (math.log1p(u) - u))  # noqa: E731
    if x == 0.0:
        return checked_quad(integrand, 0.0, upper) / math.pi
    return checked_quad(integrand, 0.0, upper, weight="cos", wvar=abs(x)) / math.pi


def student3_transition_pdf(x, t: float):
    """p(x, t | 3) = Re{ e^{t+ix} Gamma(t+1, t+ix) / (pi (t+ix)^{t+1}) }.

    For t above the configured switch the same density is obtained by direct
    quadrature of e^{-t|u|} (1+|u|)^t, where Gamma(t+1, .) no longer fits a double.
    """
    t = _require_positive("t", t)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if t > config.numerics.large_t_switch:
        logger.debug("student3_transition_pdf: direct quadrature branch for t=%s", t)
        kernel = _student3_direct
    else:
        kernel = _student3_closed_form
    out = np.array([kernel(float(xi), t) for xi in x_arr.ravel()]).reshape(x_arr.shape)
    return as_output(out.reshape(np.shape(x)) if np.ndim(x) else out, x)


def student3_integer_time_pdf(x, n: int):
    """p(x, n | 3) for integer n from the finite sum (1/pi) sum_j n!/(n-j)! Re{(n+ix)^-(j+1)}."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    x_arr = np.asarray(x, dtype=float)
    w = 1.0 / (n + 1j * x_arr)
    term = w
    total = term
    for j in range(1, n + 1):
        term = term * (n - j + 1) * w
        total = total + term
    return as_output(np.real(total) / math.pi, x)


def student3_tail_coefficient(t: float) -> float:
    """lim x^4 p(x, t | 3) = 2t / pi."""
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return 2.0 * t / math.pi


def student3_tail_expansion(x, t: float):
    """Four-term large-|x| expansion of p(x, t | 3) as one rational function."""
    t = _require_positive("t", t)
    x_arr = np.asarray(x, dtype=float)
    x2 = x_arr * x_arr
    numerator = 2 * t * x2 * x2 - 4 * t**3 * (t * t - 5 * t + 3) * x2 + 2 * t**5 * (2 * t * t - 2 * t + 1)
    return as_output(numerator / (math.pi * (t * t + x2) ** 4), x)


def student3_normalization(t: float, cutoff: float = 400.0) -> float:
    """int p(x, t | 3) dx over |x| <= cutoff plus the x^-4 tail beyond it."""
    t = _require_positive("t", t)
    body = checked_quad(lambda x: _scalar_student3(x, t), 0.0, cutoff, points=[t])
    return 2.0 * body + 4.0 * t / (3.0 * math.pi * cutoff**3)


def student3_variance_check(t: float, cutoff: float = 400.0) -> float:
    """int x^2 p(x, t | 3) dx, truncation-corrected with the 2t/(pi x^4) tail."""
    t = _require_positive("t", t)
    body = checked_quad(lambda x: x * x * _scalar_student3(x, t), 0.0, cutoff, points=[t])
    return 2.0 * body + 4.0 * t / (math.pi * cutoff)


def _scalar_student3(x: float, t: float) -> float:
    if t > config.numerics.large_t_switch:
        return _student3_direct(x, t)
    return _student3_closed_form(x, t)


# ---------------------------------------------------------------------------
# User units, grids and the forward equation
# ---------------------------------------------------------------------------


def process_pdf(spec: ProcessSpec, x, dt: float):
    """Transition pdf over elapsed time dt in user units."""
    t = _require_positive("dt", dt) / spec.time_scale
    law = spec.law
    if isinstance(law, VGParams):
        return vg_pdf(VGParams(lam=law.lam * t, alpha=law.alpha), x)
    if isinstance(law, NormalParams):
        return normal_pdf(NormalParams(sigma=law.sigma * math.sqrt(t)), x)
    if isinstance(law, CauchyParams) or (isinstance(law, StudentParams) and law.nu == 1.0):
        return cauchy_pdf(CauchyParams(delta=law.delta * t), x)
    if isinstance(law, StudentParams) and law.nu == 3.0:
        x_arr = np.asarray(x, dtype=float)
        return as_output(np.asarray(student3_transition_pdf(x_arr / law.delta, t)) / law.delta, x)

    # No closed form: Fourier inversion on the sorted distinct points
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    grid, inverse = np.unique(x_arr.ravel(), return_inverse=True)
    recovered = invert_chf(lambda u: transition_chf(spec, u, dt), grid)
    out = recovered.values[inverse].reshape(x_arr.shape)
    return as_output(out.reshape(np.shape(x)) if np.ndim(x) else out, x)


def evaluate_grid(fn: Callable, xs, workers: Optional[int] = None) -> np.ndarray:
    """fn over xs, split into contiguous chunks across threads and re-joined in order."""
    xs = np.asarray(xs, dtype=float)
    workers = workers or config.worker_count()
    if workers <= 1 or xs.size < 2 * workers:
        return np.asarray(fn(xs), dtype=float)
    chunks = np.array_split(xs, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda chunk: np.asarray(fn(chunk), dtype=float), chunks))
    return np.concatenate(parts)


def pdf_grid(spec: ProcessSpec, xs, dt: float) -> GridFunction:
    """Transition pdf on a grid; points where the density diverges are left out."""
    xs = np.asarray(xs, dtype=float)
    fn = lambda chunk: process_pdf(spec, chunk, dt)  # noqa: E731
    try:
        return GridFunction(xs, evaluate_grid(fn, xs))
    except SingularityError:
        keep = xs != 0.0
        logger.info("pdf_grid: skipping x=0 where the density diverges")
        return GridFunction(xs[keep], evaluate_grid(fn, xs[keep]))


def pide_residual(kind: str, x: float, t: float, lam: float = 1.0) -> float:
    """Right minus left side of d/dt p = int_0^inf W(z) [p(x+z) + p(x-z) - 2 p(x)] dz.

    kind is "vg" (VG(lam, 1) process) or "student3". The time derivative is a
    central difference; the jump integral is split at small z, where a second
    difference of p stands in for the bracket.
    """
    from .triplet import w_student3, w_vg

    t = _require_positive("t", t)
    if kind == "vg":
        p = lambda y, s: float(vg_transition_pdf(lam, y, s))  # noqa: E731
        w = lambda z: float(w_vg(z, lam))  # noqa: E731
    elif kind == "student3":
        p = _scalar_student3
        w = lambda z: float(w_student3(z))  # noqa: E731
    else:
        raise DomainError(f"Unknown process kind for PIDE check: {kind!r}")

    h = 1e-4 * t
    lhs = (p(x, t + h) - p(x, t - h)) / (2.0 * h)

    z0 = 1e-3
    d = 1e-2
    p0 = p(x, t)
    second = (p(x + d, t) + p(x - d, t) - 2.0 * p0) / (d * d)
    small = second * checked_quad(lambda z: z * z * w(z), 0.0, z0)

    bracket = lambda z: w(z) * (p(x + z, t) + p(x - z, t) - 2.0 * p0)  # noqa: E731
    edges = sorted({z0, 1.0, *([abs(x)] if abs(x) > z0 else [])})
    large = sum(checked_quad(bracket, lo, hi) for lo, hi in zip(edges[:-1], edges[1:]))
    large += checked_quad(bracket, edges[-1], math.inf)
    return small + large - lhs
