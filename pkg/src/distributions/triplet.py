"""Levy triplets (A, B, W) in closed form and extracted from characteristic functions.

The extraction integrals only exist as distributional limits. They are
regularised by fitting the large-u behaviour of psi = phi'/phi to
a1 u + a0 + b1/u + b2/u^2, handling the a1 u + a0 part analytically and
integrating the remainder, with the b1/u + b2/u^2 tail closed beyond the
truncation point.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..config import config
from ..errors import DomainError, NumericFailure
from ..kernel.quadrature import checked_quad, fourier_tail
from ..kernel.specfun import as_output, auxiliary_f, auxiliary_f_complement, cos_integral, sin_integral
from ..models import ReferenceProcess, Table, TripletKind

logger = logging.getLogger(__name__)


@dataclass
class LevyTriplet:
    """Drift A, diffusion coefficient B and Levy density W(z)."""
    drift: float
    diffusion: float
    density: Callable[[float], float]
    kind: TripletKind
    label: str = ""

    def __post_init__(self):
        if self.diffusion < 0:
            raise DomainError(f"diffusion coefficient must be non-negative, got {self.diffusion}")


# ---------------------------------------------------------------------------
# Closed-form densities
# ---------------------------------------------------------------------------


def _nonzero(z) -> np.ndarray:
    z_arr = np.abs(np.asarray(z, dtype=float))
    if np.any(z_arr == 0):
        raise DomainError("Levy density is not defined at z = 0")
    return z_arr


def w_vg(z, lam: float = 1.0):
    """VG(lam, 1) Levy density lam e^{-|z|} / |z|."""
    if lam <= 0:
        raise DomainError(f"lam must be positive, got {lam}")
    az = _nonzero(z)
    return as_output(lam * np.exp(-az) / az, z)


def w_student3(z):
    """T(3) Levy density [1 - |z| (sin|z| ci|z| - cos|z| si|z|)] / (pi z^2)."""
    az = _nonzero(z)
    return as_output(np.asarray(auxiliary_f_complement(az)) / (math.pi * az * az), z)


def reference_triplet(kind: ReferenceProcess, a: float = 1.0, time_scale: float = 1.0) -> LevyTriplet:
    """Wiener (0, a^2/T, 0) or Cauchy (0, 0, a/(pi T z^2)) triplet."""
    kind = ReferenceProcess(kind)
    if a <= 0 or time_scale <= 0:
        raise DomainError("scale a and time scale T must be positive")
    if kind == ReferenceProcess.WIENER:
        return LevyTriplet(0.0, a * a / time_scale, lambda z: 0.0, TripletKind.CLOSED_FORM, "wiener")
    density = lambda z: as_output(a / (math.pi * time_scale * _nonzero(z) ** 2), z)  # noqa: E731
    return LevyTriplet(0.0, 0.0, density, TripletKind.CLOSED_FORM, "cauchy")


def closed_form_triplet(kind: str, lam: float = 1.0) -> LevyTriplet:
    """Pure-jump triplet of the VG(lam, 1) ("vg") or T(3) ("student3") process."""
    if kind == "vg":
        return LevyTriplet(0.0, 0.0, lambda z: w_vg(z, lam), TripletKind.CLOSED_FORM, f"vg(lam={lam})")
    if kind == "student3":
        return LevyTriplet(0.0, 0.0, w_student3, TripletKind.CLOSED_FORM, "student3")
    raise DomainError(f"No closed-form triplet for {kind!r}")


def student3_b_epsilon(eps: float) -> float:
    """Closed form of the T(3) diffusion integral at cutoff eps; tends to 0 with eps."""
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    si, ci = sin_integral(eps), cos_integral(eps)
    bracket = math.pi / 2 - (ci - eps * si) * math.sin(eps) + (eps * ci + si) * math.cos(eps)
    return 2.0 / math.pi * bracket


def levy_density_table(zs: Sequence[float], lam: float = 1.0) -> Table:
    """Rows (z, W_T3(z), W_VG(z)) for plotting both densities side by side."""
    zs = np.asarray(zs, dtype=float)
    ws = np.atleast_1d(w_student3(zs))
    wv = np.atleast_1d(w_vg(zs, lam))
    return Table(header=["z", "w_student3", "w_vg"], rows=list(zip(zs.tolist(), ws.tolist(), wv.tolist())))


# ---------------------------------------------------------------------------
# Extraction from a characteristic function
# ---------------------------------------------------------------------------


@dataclass
class _Asymptote:
    """psi(u) ~ linear u + constant + inv1/u + inv2/u^2 for large u."""
    linear: float
    constant: float
    inv1: float
    inv2: float


def _call(fn: Callable, u: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(fn(u))
        if values.shape == u.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([fn(float(v)) for v in u])


def _fit_asymptote(fn: Callable[[np.ndarray], np.ndarray], m: float) -> _Asymptote:
    nodes = m * np.array([0.125, 0.25, 0.5, 1.0])
    design = np.column_stack([nodes, np.ones_like(nodes), 1.0 / nodes, 1.0 / nodes**2])
    coeffs = np.linalg.solve(design, fn(nodes))
    return _Asymptote(*(float(c) for c in coeffs))


def _usable_truncation(chf: Callable, m: float) -> float:
    """Halve m until |chf(m)| stays above the underflow floor."""
    floor = config.numerics.underflow_floor
    start = m
    while abs(complex(_call(chf, np.array([m]))[0])) < floor:
        m *= 0.5
        if m < 1.0:
            raise NumericFailure("characteristic function underflows below u = 1")
    if m != start:
        logger.debug("triplet extraction: truncation reduced from %s to %s", start, m)
    return m


def _psi(chf: Callable, chf_derivative: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """u -> phi'(u)/phi(u), complex valued."""
    def psi(u):
        u = np.asarray(u, dtype=float)
        return _call(chf_derivative, u) / _call(chf, u)
    return psi


def _odd_part(psi: Callable) -> Callable[[np.ndarray], np.ndarray]:
    return lambda u: np.real(0.5 * (psi(u) - psi(-np.asarray(u))))


def _extrapolate_to_zero(eps: Sequence[float], values: Sequence[float]) -> float:
    """Quadratic through (eps_i, value_i), evaluated at eps = 0."""
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    if eps.size != 3 or np.any(eps <= 0) or len(set(eps.tolist())) != 3:
        raise DomainError("need three distinct positive eps values")
    limit = float(np.polyval(np.polyfit(eps, values, 2), 0.0))
    order = np.argsort(eps)
    last_step = abs(values[order[0]] - values[order[1]])
    if abs(limit - values[order[0]]) > 4.0 * last_step + 1e-9:
        raise NumericFailure("eps extrapolation is unstable", worst_estimate=limit)
    return limit


def _is_even(chf: Callable) -> bool:
    sample_u = np.linspace(0.1, 10.0, 25)
    return bool(np.allclose(_call(chf, sample_u), _call(chf, -sample_u), rtol=1e-13, atol=1e-15))


def _b_kernel(u: np.ndarray, eps: float) -> np.ndarray:
    """(u eps cos(u eps) - sin(u eps)) / u^2, with its series near u eps = 0."""
    u = np.asarray(u, dtype=float)
    v = u * eps
    small = np.abs(v) < 1e-3
    safe_u = np.where(small, 1.0, u)
    direct = (v * np.cos(v) - np.sin(v)) / safe_u**2
    series = -(eps**3) * u / 3.0 + eps**5 * u**3 / 30.0
    return np.where(small, series, direct)


def numeric_w(
    chf: Callable,
    chf_derivative: Callable,
    z: float,
    M: Optional[float] = None,
) -> float:
    """W(z) = (1/(2 pi i z)) lim int_{-M}^{M} psi(u) e^{-iuz} du for a real even chf.

    With psi odd this is -(1/(pi z)) int_0^inf psi(u) sin(uz) du, evaluated as
    a0/z (from int sin = 1/z) plus a sine-weighted QUADPACK integral of the
    remainder and the si/ci closed form of the fitted tail.
    """
    if z == 0:
        raise DomainError("Levy density is not defined at z = 0")
    az = abs(float(z))
    m = _usable_truncation(chf, float(M or config.numerics.triplet_truncation))
    psi = _odd_part(_psi(chf, chf_derivative))
    fit = _fit_asymptote(psi, m)

    remainder = lambda u: float(psi(np.array([u]))[0]) - fit.linear * u - fit.constant  # noqa: E731
    body = checked_quad(remainder, 0.0, m, weight="sin", wvar=az)
    mz = m * az
    tail = fit.inv1 * (-float(sin_integral(mz))) + fit.inv2 * (math.sin(mz) / m - az * float(cos_integral(mz)))
    return -(fit.constant / az + body + tail) / (math.pi * az)


def numeric_b(
    chf: Callable,
    chf_derivative: Callable,
    M: Optional[float] = None,
    eps_sequence: Optional[Sequence[float]] = None,
) -> float:
    """B = (1/pi) lim_eps lim_M int psi(u) (u eps cos(u eps) - sin(u eps)) / u^2 du."""
    eps_sequence = tuple(eps_sequence or config.numerics.eps_sequence)
    m = _usable_truncation(chf, float(M or config.numerics.triplet_truncation))
    psi = _odd_part(_psi(chf, chf_derivative))
    fit = _fit_asymptote(psi, m)

    def at(eps: float) -> float:
        def integrand(u):
            rest = float(psi(np.array([u]))[0]) - fit.linear * u - fit.constant
            return rest * float(_b_kernel(np.array([u]), eps)[0])

        body = checked_quad(integrand, 0.0, m)
        tail = fourier_tail(lambda u: eps * (fit.inv1 / u**2 + fit.inv2 / u**3), m, eps, "cos")
        tail -= fourier_tail(lambda u: fit.inv1 / u**3 + fit.inv2 / u**4, m, eps, "sin")
        # int_0^inf u k du = -pi/2 and int_0^inf k du = -eps
        return -fit.linear - 2.0 * eps * fit.constant / math.pi + 2.0 / math.pi * (body + tail)

    values = [at(e) for e in eps_sequence]
    logger.debug("numeric_b: B(eps) = %s at eps = %s", values, eps_sequence)
    return _extrapolate_to_zero(eps_sequence, values)


def numeric_a(
    chf: Callable,
    chf_derivative: Callable,
    M: Optional[float] = None,
    eps_sequence: Optional[Sequence[float]] = None,
) -> float:
    """A = (1/(i pi)) lim_eps lim_M int psi(u) sin(u eps)/u du; exactly 0 for even chfs."""
    if _is_even(chf):
        return 0.0
    eps_sequence = tuple(eps_sequence or config.numerics.eps_sequence)
    m = _usable_truncation(chf, float(M or config.numerics.triplet_truncation))
    psi = _psi(chf, chf_derivative)

    # Only the even part of psi survives; for a chf with phi(-u) = conj(phi(u)) it is i Im psi.
    even_imag = lambda u: np.imag(0.5 * (psi(u) + psi(-np.asarray(u))))  # noqa: E731
    fit = _fit_asymptote(even_imag, m)
    if abs(fit.linear) > 1e-8 * (1.0 + abs(fit.constant)):
        raise NumericFailure("drift integral diverges: even part of phi'/phi grows linearly", fit.linear)

    def at(eps: float) -> float:
        def integrand(u):
            rest = float(even_imag(np.array([u]))[0]) - fit.constant
            return rest * eps * float(np.sinc(u * eps / math.pi))

        body = checked_quad(integrand, 0.0, m)
        tail = fourier_tail(lambda u: fit.inv1 / u**2 + fit.inv2 / u**3, m, eps, "sin")
        return fit.constant + 2.0 / math.pi * (body + tail)

    values = [at(e) for e in eps_sequence]
    return _extrapolate_to_zero(eps_sequence, values)


def numeric_triplet(chf: Callable, chf_derivative: Callable, M: Optional[float] = None) -> LevyTriplet:
    """(A, B, W) extracted from a chf; W is evaluated lazily per z."""
    drift = numeric_a(chf, chf_derivative, M)
    diffusion = numeric_b(chf, chf_derivative, M)
    if -1e-6 < diffusion < 0:
        diffusion = 0.0
    density = lambda z: numeric_w(chf, chf_derivative, z, M)  # noqa: E731
    return LevyTriplet(drift, diffusion, density, TripletKind.NUMERIC, "numeric")


# ---------------------------------------------------------------------------
# Levy-Khinchin check and activity
# ---------------------------------------------------------------------------


def _jump_exponent(density: Callable, u: float) -> float:
    """2 int_0^inf (cos(uz) - 1) W(z) dz."""
    if u == 0:
        return 0.0
    w = lambda z: float(density(z))  # noqa: E731
    near = checked_quad(lambda z: -2.0 * math.sin(0.5 * u * z) ** 2 * w(z), 0.0, 1.0)
    far = fourier_tail(w, 1.0, u, "cos") - checked_quad(w, 1.0, math.inf)
    return 2.0 * (near + far)


def levy_khinchin_residual(triplet: LevyTriplet, chf: Callable, u_grid: Sequence[float]) -> float:
    """sup over the grid of |log phi(u) - (-B u^2/2 + 2 int_0^inf (cos uz - 1) W dz)|."""
    u_grid = np.asarray(u_grid, dtype=float)
    log_phi = np.log(np.abs(_call(chf, u_grid)))
    worst = 0.0
    for u, target in zip(u_grid, log_phi):
        exponent = -0.5 * triplet.diffusion * u * u + _jump_exponent(triplet.density, float(u))
        worst = max(worst, abs(float(target) - exponent))
    return worst


def student3_jump_integral(u: float) -> float:
    """(2/pi) int_0^inf [sin z ci z - cos z si z] (1 - cos uz) / z dz, equal to log(1+|u|)."""
    u = abs(float(u))
    if u == 0:
        return 0.0
    g = lambda z: float(auxiliary_f(z)) / z  # noqa: E731
    near = checked_quad(lambda z: 2.0 * math.sin(0.5 * u * z) ** 2 * g(z), 0.0, 1.0)
    far = checked_quad(g, 1.0, math.inf) - fourier_tail(g, 1.0, u, "cos")
    return 2.0 / math.pi * (near + far)


def integrability_split(density: Callable) -> tuple[float, float]:
    """(int_{|z|<=1} z^2 W dz, int_{|z|>1} W dz), both finite for a Levy measure."""
    w = lambda z: float(density(z))  # noqa: E731
    small = 2.0 * checked_quad(lambda z: z * z * w(z), 0.0, 1.0)
    large = 2.0 * checked_quad(w, 1.0, math.inf)
    return small, large


def infinite_activity_exponent(
    density: Callable,
    eps_values: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5),
) -> float:
    """Exponent p of W(z) ~ z^-p near 0, fitted from the growth of int_eps^1 W dz.

    p = 1 means logarithmic divergence, p > 1 power-law divergence; either way
    the Levy measure has infinite mass.
    """
    eps = np.sort(np.asarray(eps_values, dtype=float))[::-1]
    if eps.size < 3 or eps[0] >= 1.0 or eps[-1] <= 0:
        raise DomainError("need at least three eps values in (0, 1)")
    w = lambda z: float(density(z))  # noqa: E731
    increments = np.array([checked_quad(w, lo, hi) for hi, lo in zip(eps[:-1], eps[1:])])
    if np.any(increments <= 0):
        raise NumericFailure("Levy density integral is not increasing towards the origin")
    slope = np.polyfit(np.log(eps[1:]), np.log(increments), 1)[0]
    return float(1.0 - slope)
