"""Pdfs, chfs and moments of the centered symmetric GH, VG and Student laws.

Every density and characteristic function accepts a float or a numpy array and
returns the same shape. All characteristic functions are real and even.
"""

import math
from fractions import Fraction

import numpy as np
from scipy import special

from ..errors import DomainError, MomentNotFoundError, SingularityError
from ..kernel.specfun import as_output, log_bessel_k
from ..models import CauchyParams, GHParams, NormalParams, StudentParams, VGParams

LOG_SQRT_PI = 0.5 * math.log(math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _even_order(order: int) -> int | None:
    """Half the order for even moments, None for odd ones."""
    if int(order) != order or order < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {order}")
    order = int(order)
    if order % 2:
        return None
    return order // 2


def _double_factorial_odd(k: int) -> int:
    """(2k-1)!!, with (-1)!! = 1."""
    return math.prod(range(1, 2 * k, 2))


# ---------------------------------------------------------------------------
# Generalized Hyperbolic
# ---------------------------------------------------------------------------


def gh_pdf(p: GHParams, x):
    """GH(lam, alpha, delta) density."""
    x_arr = np.abs(np.asarray(x, dtype=float))
    a, d, lam = p.alpha, p.delta, p.lam
    r = a * np.sqrt(d * d + x_arr * x_arr)
    log_norm = math.log(a) - lam * math.log(d * a) - log_bessel_k(lam, d * a) - LOG_SQRT_2PI
    log_pdf = log_norm + (lam - 0.5) * np.log(r) + log_bessel_k(lam - 0.5, r)
    return as_output(np.exp(log_pdf), x)


def gh_chf(p: GHParams, u):
    """GH(lam, alpha, delta) characteristic function."""
    u_arr = np.asarray(u, dtype=float)
    a, d, lam = p.alpha, p.delta, p.lam
    s = d * np.sqrt(a * a + u_arr * u_arr)
    log_chf = lam * math.log(d * a) - log_bessel_k(lam, d * a) + log_bessel_k(lam, s) - lam * np.log(s)
    return as_output(np.exp(log_chf), u)


def gh_chf_derivative(p: GHParams, u):
    """d/du of the GH chf, from d/dz [z^-lam K_lam(z)] = -z^-lam K_{lam+1}(z)."""
    u_arr = np.asarray(u, dtype=float)
    a, d, lam = p.alpha, p.delta, p.lam
    s = d * np.sqrt(a * a + u_arr * u_arr)
    ratio = np.exp(log_bessel_k(lam + 1.0, s) - log_bessel_k(lam, s))
    return as_output(-np.asarray(gh_chf(p, u_arr)) * d * d * u_arr * ratio / s, u)


# ---------------------------------------------------------------------------
# Variance Gamma
# ---------------------------------------------------------------------------


def vg_pdf(p: VGParams, x):
    """VG(lam, alpha) density via K_{lam-1/2}.

    Raises SingularityError at x = 0 when lam <= 1/2 (the density diverges).
    """
    x_arr = np.abs(np.asarray(x, dtype=float))
    lam, a = p.lam, p.alpha
    nu = lam - 0.5
    at_zero = x_arr == 0
    if np.any(at_zero) and lam <= 0.5:
        raise SingularityError(f"VG density with lam={lam} diverges at x=0")

    out = np.empty(x_arr.shape)
    log_norm = math.log(a) - LOG_SQRT_PI - special.gammaln(lam)
    if np.any(at_zero):
        # (z/2)^nu K_nu(z) -> Gamma(nu)/2 as z -> 0
        out[at_zero] = a * math.exp(special.gammaln(nu) - special.gammaln(lam)) / (2.0 * math.sqrt(math.pi))
    rest = ~at_zero
    if np.any(rest):
        z = a * x_arr[rest]
        out[rest] = np.exp(log_norm + nu * np.log(z / 2.0) + log_bessel_k(nu, z))
    return as_output(out, x)


def vg_pdf_elementary(p: VGParams, x):
    """VG density for integer lam = n + 1 from its finite elementary sum."""
    if p.lam != int(p.lam):
        raise DomainError(f"elementary VG form needs an integer lam, got {p.lam}")
    n = int(p.lam) - 1
    a = p.alpha
    z = a * np.abs(np.asarray(x, dtype=float))
    # coefficients (2n-k)! / (k! (n-k)!) multiplying (2z)^k
    coeffs = [
        math.factorial(2 * n - k) / (math.factorial(k) * math.factorial(n - k)) for k in range(n, -1, -1)
    ]
    poly = np.polyval(coeffs, 2.0 * z)
    scale = a / (2.0 ** (2 * n + 1) * math.factorial(n))
    return as_output(scale * np.exp(-z) * poly, x)


def vg_chf(p: VGParams, u):
    """VG chf (alpha^2 / (alpha^2 + u^2))^lam."""
    u_arr = np.asarray(u, dtype=float)
    a2 = p.alpha * p.alpha
    return as_output(np.exp(-p.lam * np.log1p(u_arr * u_arr / a2)), u)


def vg_chf_derivative(p: VGParams, u):
    u_arr = np.asarray(u, dtype=float)
    return as_output(-2.0 * p.lam * u_arr / (p.alpha**2 + u_arr**2) * np.asarray(vg_chf(p, u_arr)), u)


def vg_moment(p: VGParams, order: int) -> float:
    """m(2k) = 2^k (2k-1)!! alpha^-2k Gamma(lam+k)/Gamma(lam); odd orders are 0."""
    k = _even_order(order)
    if k is None:
        return 0.0
    log_value = (
        k * math.log(2.0)
        + math.log(_double_factorial_odd(k))
        - 2 * k * math.log(p.alpha)
        + special.gammaln(p.lam + k)
        - special.gammaln(p.lam)
    )
    return math.exp(log_value)


def vg_variance(p: VGParams) -> float:
    return 2.0 * p.lam / p.alpha**2


# ---------------------------------------------------------------------------
# Student
# ---------------------------------------------------------------------------


def student_pdf(p: StudentParams, x):
    """T(nu, delta) density (delta^2 / (delta^2 + x^2))^((nu+1)/2) / (delta B(1/2, nu/2))."""
    x_arr = np.asarray(x, dtype=float)
    nu, d = p.nu, p.delta
    log_pdf = -math.log(d) - special.betaln(0.5, 0.5 * nu) - 0.5 * (nu + 1.0) * np.log1p((x_arr / d) ** 2)
    return as_output(np.exp(log_pdf), x)


def student_pdf_odd(n: int, x):
    """T(2n+1, 1) density in closed form (2n)!! / (pi (2n-1)!!) (1+x^2)^-(n+1)."""
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    n = int(n)
    x_arr = np.asarray(x, dtype=float)
    even = math.prod(range(2, 2 * n + 1, 2))
    odd = _double_factorial_odd(n)
    return as_output(even / (math.pi * odd) * (1.0 + x_arr * x_arr) ** (-(n + 1)), x)


def student3_cdf(x):
    """Distribution function of T(3, 1): 1/2 + (arctan x + x/(1+x^2))/pi."""
    x_arr = np.asarray(x, dtype=float)
    return as_output(0.5 + (np.arctan(x_arr) + x_arr / (1.0 + x_arr * x_arr)) / math.pi, x)


def student_chf(p: StudentParams, u):
    """T(nu, delta) chf 2^(1-nu/2)/Gamma(nu/2) z^(nu/2) K_{nu/2}(z), z = delta |u|."""
    u_arr = np.atleast_1d(np.abs(np.asarray(u, dtype=float)))
    half = 0.5 * p.nu
    out = np.ones(u_arr.shape)
    nz = u_arr > 0
    if np.any(nz):
        z = p.delta * u_arr[nz]
        log_chf = (1.0 - half) * math.log(2.0) - special.gammaln(half) + half * np.log(z) + log_bessel_k(half, z)
        out[nz] = np.exp(log_chf)
    return as_output(out.reshape(np.shape(u)) if np.ndim(u) else out, u)


def student_chf_derivative(p: StudentParams, u):
    """d/du of the Student chf, from d/dz [z^m K_m(z)] = -z^m K_{m-1}(z)."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    half = 0.5 * p.nu
    out = np.zeros(u_arr.shape)
    nz = u_arr != 0
    if np.any(nz):
        z = p.delta * np.abs(u_arr[nz])
        ratio = np.exp(log_bessel_k(half - 1.0, z) - log_bessel_k(half, z))
        out[nz] = -p.delta * np.sign(u_arr[nz]) * ratio * np.asarray(student_chf(p, u_arr[nz]))
    return as_output(out.reshape(np.shape(u)) if np.ndim(u) else out, u)


def _odd_chf_coefficients(n: int) -> list[float]:
    """Coefficients of (2|u|)^l / l! scaled by n!(2n-l)! / ((2n)!(n-l)!), highest power first."""
    coeffs = []
    for ell in range(n, -1, -1):
        c = Fraction(
            math.factorial(n) * math.factorial(2 * n - ell) * 2**ell,
            math.factorial(2 * n) * math.factorial(n - ell) * math.factorial(ell),
        )
        coeffs.append(float(c))
    return coeffs


def student_chf_odd(n: int, u):
    """T(2n+1, 1) chf as e^{-|u|} times a polynomial of degree n."""
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    a = np.abs(np.asarray(u, dtype=float))
    return as_output(np.exp(-a) * np.polyval(_odd_chf_coefficients(int(n)), a), u)


def student_moment(p: StudentParams, order: int) -> float:
    """m(2k) = delta^2k B(1/2+k, nu/2-k) / B(1/2, nu/2), existing only for 2k < nu."""
    k = _even_order(order)
    if k is None:
        return 0.0
    if 2 * k >= p.nu:
        raise MomentNotFoundError(f"moment of order {order} does not exist for nu={p.nu}")
    if k == 0:
        return 1.0
    log_value = 2 * k * math.log(p.delta) + special.betaln(0.5 + k, 0.5 * p.nu - k) - special.betaln(0.5, 0.5 * p.nu)
    return math.exp(log_value)


def student_variance(p: StudentParams) -> float:
    if p.nu <= 2:
        raise MomentNotFoundError(f"variance is infinite for nu={p.nu} <= 2")
    return p.delta**2 / (p.nu - 2.0)


def unit_variance_vg(lam: float, sigma: float = 1.0) -> VGParams:
    """VG(lam, sqrt(2 lam)/sigma): variance sigma^2 for every lam."""
    return VGParams(lam=lam, alpha=math.sqrt(2.0 * lam) / sigma)


def unit_variance_student(nu: float, sigma: float = 1.0) -> StudentParams:
    """T(nu, sigma sqrt(nu-2)): variance sigma^2 for every nu > 2."""
    if nu <= 2:
        raise DomainError(f"fixed-variance Student family needs nu > 2, got {nu}")
    return StudentParams(nu=nu, delta=sigma * math.sqrt(nu - 2.0))


# ---------------------------------------------------------------------------
# Reference stable laws
# ---------------------------------------------------------------------------


def normal_pdf(p: NormalParams, x):
    x_arr = np.asarray(x, dtype=float)
    return as_output(np.exp(-0.5 * (x_arr / p.sigma) ** 2 - LOG_SQRT_2PI) / p.sigma, x)


def normal_chf(p: NormalParams, u):
    u_arr = np.asarray(u, dtype=float)
    return as_output(np.exp(-0.5 * (p.sigma * u_arr) ** 2), u)


def cauchy_pdf(p: CauchyParams, x):
    x_arr = np.asarray(x, dtype=float)
    return as_output(p.delta / (math.pi * (p.delta**2 + x_arr * x_arr)), x)


def cauchy_chf(p: CauchyParams, u):
    u_arr = np.asarray(u, dtype=float)
    return as_output(np.exp(-p.delta * np.abs(u_arr)), u)


# ---------------------------------------------------------------------------
# Dispatch over LawParams
# ---------------------------------------------------------------------------


def law_pdf(law, x):
    """Density of any supported law."""
    if isinstance(law, VGParams):
        return vg_pdf(law, x)
    if isinstance(law, StudentParams):
        return student_pdf(law, x)
    if isinstance(law, GHParams):
        return gh_pdf(law, x)
    if isinstance(law, NormalParams):
        return normal_pdf(law, x)
    if isinstance(law, CauchyParams):
        return cauchy_pdf(law, x)
    raise DomainError(f"Unsupported law: {law!r}")


def law_chf(law, u):
    """Characteristic function of any supported law."""
    if isinstance(law, VGParams):
        return vg_chf(law, u)
    if isinstance(law, StudentParams):
        return student_chf(law, u)
    if isinstance(law, GHParams):
        return gh_chf(law, u)
    if isinstance(law, NormalParams):
        return normal_chf(law, u)
    if isinstance(law, CauchyParams):
        return cauchy_chf(law, u)
    raise DomainError(f"Unsupported law: {law!r}")


def law_chf_derivative(law, u):
    """First derivative of the characteristic function."""
    if isinstance(law, VGParams):
        return vg_chf_derivative(law, u)
    if isinstance(law, StudentParams):
        return student_chf_derivative(law, u)
    if isinstance(law, GHParams):
        return gh_chf_derivative(law, u)
    if isinstance(law, NormalParams):
        u_arr = np.asarray(u, dtype=float)
        return as_output(-(law.sigma**2) * u_arr * np.asarray(normal_chf(law, u_arr)), u)
    if isinstance(law, CauchyParams):
        u_arr = np.asarray(u, dtype=float)
        return as_output(-law.delta * np.sign(u_arr) * np.asarray(cauchy_chf(law, u_arr)), u)
    raise DomainError(f"Unsupported law: {law!r}")


def law_variance(law) -> float:
    """Variance of any supported law (MomentNotFoundError when infinite)."""
    if isinstance(law, VGParams):
        return vg_variance(law)
    if isinstance(law, StudentParams):
        return student_variance(law)
    if isinstance(law, NormalParams):
        return law.sigma**2
    if isinstance(law, CauchyParams):
        raise MomentNotFoundError("the Cauchy law has no variance")
    if isinstance(law, GHParams):
        # E[X^2] = delta K_{lam+1}(alpha delta) / (alpha K_lam(alpha delta)) for symmetric GH
        z = law.alpha * law.delta
        return law.delta / law.alpha * math.exp(log_bessel_k(law.lam + 1.0, z) - log_bessel_k(law.lam, z))
    raise DomainError(f"Unsupported law: {law!r}")


