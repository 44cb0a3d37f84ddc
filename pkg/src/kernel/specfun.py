"""Special functions: modified Bessel K, complex upper incomplete gamma, si/ci, log-gamma.

Scalar functions validate their domain and raise `DomainError`; overflow and
non-convergence raise `NumericFailure`. Functions marked "vectorised" accept
numpy arrays and return an array of the same shape (a float for scalar input).
"""

import cmath
import logging
import math

import numpy as np
from scipy import special

from ..config import config
from ..errors import DomainError, NumericFailure

logger = logging.getLogger(__name__)

FPMIN = 1e-300
EPS = 2.2e-16

# Below this the auxiliary f(x) is evaluated from si/ci directly.
AUX_ASYMPTOTIC_FROM = 40.0


def as_output(values: np.ndarray, like):
    """Return a float for scalar input, the array otherwise."""
    if np.ndim(like) == 0:
        return float(np.asarray(values).reshape(()))
    return values


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a finite positive number, got {value}")
    return value


# ---------------------------------------------------------------------------
# Modified Bessel functions of the second kind
# ---------------------------------------------------------------------------


def bessel_k_half(n: int, z: float) -> float:
    """K_{n+1/2}(z) from its finite elementary sum.

    K_{n+1/2}(z) = sqrt(pi/2z) e^{-z} sum_{j=0}^{n} (n+j)! / (j!(n-j)!) (2z)^{-j}
    """
    if int(n) != n or n < 0:
        raise DomainError(f"order index n must be a non-negative integer, got {n}")
    n = int(n)
    z = _require_positive("z", z)

    term = 1.0
    total = 1.0
    for j in range(n):
        term *= (n + j + 1) * (n - j) / ((j + 1) * 2.0 * z)
        total += term
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def bessel_k(nu: float, z: float) -> float:
    """K_nu(z) for real order, z > 0."""
    nu = float(nu)
    if not math.isfinite(nu):
        raise DomainError(f"order must be finite, got {nu}")
    z = _require_positive("z", z)
    with np.errstate(over="ignore"):
        value = float(special.kv(abs(nu), z))
    if not math.isfinite(value):
        raise NumericFailure(f"K_{nu}({z}) overflows double precision", worst_estimate=value)
    return value


def log_bessel_k(nu: float, z):
    """log K_nu(z), finite where K_nu itself overflows (vectorised in z).

    Uses the exponentially scaled Bessel routine; where that overflows, the
    small-argument expansion K_nu(z) ~ Gamma(nu)/2 (2/z)^nu (1 - z^2/(4(nu-1))).
    """
    nu = abs(float(nu))
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(z_arr)) or np.any(z_arr <= 0):
        raise DomainError("z must be finite and positive")

    with np.errstate(over="ignore", divide="ignore"):
        out = np.log(special.kve(nu, z_arr)) - z_arr

    bad = ~np.isfinite(out)
    if np.any(bad):
        zb = z_arr[bad]
        if nu == 0 or np.any(zb > 0.1 * math.sqrt(max(nu, 1.0))):
            raise NumericFailure(f"log K_{nu} not representable at z={zb.max()}")
        logger.debug("log_bessel_k: small-z expansion for order %s at %d points", nu, zb.size)
        lead = math.log(0.5) + special.gammaln(nu) + nu * np.log(2.0 / zb)
        if nu > 1:
            lead = lead + np.log1p(-(zb**2) / (4.0 * (nu - 1.0)))
        out[bad] = lead
    return as_output(out.reshape(np.shape(z)) if np.ndim(z) else out, z)


# ---------------------------------------------------------------------------
# Complex upper incomplete gamma
# ---------------------------------------------------------------------------


def _lower_series(a: float, z: complex) -> complex:
    """sum_n z^n / (a (a+1) ... (a+n)), so that gamma(a, z) = z^a e^-z times this sum."""
    term = 1.0 / a
    total = term
    for n in range(1, config.numerics.gamma_max_iter):
        term *= z / (a + n)
        total += term
        if abs(term) < abs(total) * EPS:
            return total
    raise NumericFailure(f"incomplete gamma series did not converge for a={a}, z={z}", total)


def _log_upper_gamma_series(a: float, z: complex, log_z: complex) -> complex:
    """log Gamma(a, z) = log(Gamma(a) - gamma(a, z)), combined around the larger term."""
    log_full = complex(math.lgamma(a))
    log_lower = a * log_z - z + cmath.log(_lower_series(a, z))
    try:
        if log_lower.real <= log_full.real:
            return log_full + cmath.log(1.0 - cmath.exp(log_lower - log_full))
        return log_lower + cmath.log(cmath.exp(log_full - log_lower) - 1.0)
    except ValueError as exc:
        raise NumericFailure(f"Gamma({a}, {z}) cancels to zero in the series branch") from exc


def _lentz_fraction(a: float, z: complex) -> complex:
    """e^z z^{-a} Gamma(a, z) from the modified Lentz continued fraction."""
    b = z + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, config.numerics.gamma_max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise NumericFailure(f"incomplete gamma continued fraction did not converge for a={a}, z={z}", h)


def _check_argument(a: float, z: complex) -> tuple[float, complex]:
    a = _require_positive("a", a)
    z = complex(z)
    if z.real < 0:
        raise DomainError(f"Re(z) must be non-negative, got {z}")
    return a, z


def _exp_or_fail(log_value: complex, what: str) -> complex:
    if log_value.real > 709.0:
        raise NumericFailure(f"{what} overflows double precision", log_value)
    return cmath.exp(log_value)


def scaled_upper_gamma(a: float, z: complex) -> complex:
    """e^z z^{-a} Gamma(a, z), principal branch.

    Series for |z| < a + 1, modified Lentz continued fraction otherwise.
    """
    a, z = _check_argument(a, z)
    if z == 0:
        raise DomainError("scaled incomplete gamma is undefined at z = 0")
    if abs(z) >= a + 1.0:
        return _lentz_fraction(a, z)

    log_z = cmath.log(z)
    log_head = math.lgamma(a) + z - a * log_z
    if log_head.real < 700.0:
        # e^z z^-a Gamma(a) - sum keeps full relative accuracy when representable
        return cmath.exp(log_head) - _lower_series(a, z)
    log_value = _log_upper_gamma_series(a, z, log_z) + z - a * log_z
    return _exp_or_fail(log_value, f"scaled Gamma({a}, {z})")


def upper_gamma_complex(a: float, z: complex) -> complex:
    """Gamma(a, z) = int_z^inf e^{-w} w^{a-1} dw for a > 0, Re(z) >= 0."""
    a, z = _check_argument(a, z)
    if z == 0:
        if a >= 171.6:
            raise NumericFailure(f"Gamma({a}) overflows double precision", math.lgamma(a))
        return complex(math.gamma(a), 0.0)

    log_z = cmath.log(z)
    if abs(z) < a + 1.0:
        log_value = _log_upper_gamma_series(a, z, log_z)
    else:
        log_value = -z + a * log_z + cmath.log(_lentz_fraction(a, z))
    return _exp_or_fail(log_value, f"Gamma({a}, {z})")


# ---------------------------------------------------------------------------
# Sine and cosine integrals
# ---------------------------------------------------------------------------


def sin_integral(x):
    """si(x) = Si(x) - pi/2 = -int_x^inf sin(t)/t dt (vectorised, x >= 0)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr < 0):
        raise DomainError("sin_integral needs finite x >= 0")
    si_part, _ = special.sici(x_arr)
    return as_output(si_part - math.pi / 2.0, x)


def cos_integral(x):
    """ci(x) = -int_x^inf cos(t)/t dt (vectorised, x > 0)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr <= 0):
        raise DomainError("cos_integral needs finite x > 0 (ci diverges at 0)")
    _, ci_part = special.sici(x_arr)
    return as_output(ci_part, x)


def _aux_series(x: np.ndarray) -> np.ndarray:
    """sum_{k>=1} (-1)^{k+1} (2k)! / x^{2k}, truncated at the smallest term."""
    inv2 = 1.0 / (x * x)
    term = 2.0 * inv2
    total = term.copy()
    for k in range(2, 40):
        nxt = -term * (2 * k) * (2 * k - 1) * inv2
        # lanes whose terms start growing are frozen at the smallest term
        term = np.where(np.abs(nxt) >= np.abs(term), 0.0, nxt)
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def auxiliary_f_complement(x):
    """1 - x f(x) with f(x) = ci(x) sin(x) - si(x) cos(x) (vectorised, x > 0)."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr <= 0):
        raise DomainError("auxiliary f needs finite x > 0")
    out = np.empty_like(x_arr)
    near = x_arr < AUX_ASYMPTOTIC_FROM
    if np.any(near):
        xs = x_arr[near]
        si_part, ci_part = special.sici(xs)
        f = ci_part * np.sin(xs) - (si_part - math.pi / 2.0) * np.cos(xs)
        out[near] = 1.0 - xs * f
    if np.any(~near):
        out[~near] = _aux_series(x_arr[~near])
    return as_output(out.reshape(np.shape(x)) if np.ndim(x) else out, x)


def auxiliary_f(x):
    """f(x) = ci(x) sin(x) - si(x) cos(x) = int_0^inf sin(t)/(t+x) dt (vectorised)."""
    x_arr = np.asarray(x, dtype=float)
    return as_output((1.0 - np.asarray(auxiliary_f_complement(x_arr))) / x_arr, x)


# ---------------------------------------------------------------------------
# Gamma and Beta
# ---------------------------------------------------------------------------


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    x = _require_positive("x", x)
    return float(special.gammaln(x))


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) for a, b > 0."""
    a = _require_positive("a", a)
    b = _require_positive("b", b)
    value = float(special.beta(a, b))
    if value == 0.0 or not math.isfinite(value):
        value = math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))
    if not math.isfinite(value):
        raise NumericFailure(f"B({a}, {b}) overflows double precision")
    return value
