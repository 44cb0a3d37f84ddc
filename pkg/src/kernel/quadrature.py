"""Quadrature helpers: panel Gauss-Legendre cosine transforms and checked QUADPACK calls."""

import logging
import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate

from ..config import config
from ..errors import NumericFailure

logger = logging.getLogger(__name__)

# Cap on the number of cos(u x) entries formed at once.
_BLOCK_ENTRIES = 4_000_000


def evaluate_on(fn: Callable, nodes: np.ndarray) -> np.ndarray:
    """Evaluate fn on an array, falling back to a pointwise loop for scalar-only callables."""
    try:
        values = np.asarray(fn(nodes), dtype=float)
        if values.shape == nodes.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.fromiter((float(fn(u)) for u in nodes), dtype=float, count=nodes.size)


def gauss_legendre_panels(a: float, b: float, panels: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    all_nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    all_weights = (half[:, None] * w[None, :]).ravel()
    return all_nodes, all_weights


def cosine_transform(values: np.ndarray, nodes: np.ndarray, weights: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """sum_j w_j f(u_j) cos(u_j x) for every x, in memory-bounded blocks."""
    weighted = weights * values
    out = np.empty(xs.size)
    block = max(1, _BLOCK_ENTRIES // max(1, nodes.size))
    for start in range(0, xs.size, block):
        stop = min(xs.size, start + block)
        out[start:stop] = np.cos(np.outer(xs[start:stop], nodes)) @ weighted
    return out


def checked_quad(f: Callable[[float], float], a: float, b: float, accept: float = 1e-9, **kwargs) -> float:
    """scipy.integrate.quad that raises NumericFailure when it cannot meet `accept`.

    QUADPACK warnings are tolerated only if the reported error estimate stays
    below accept * max(1, |value|).
    """
    kwargs.setdefault("limit", config.numerics.quad_limit)
    kwargs.setdefault("epsabs", config.numerics.quad_epsabs)
    kwargs.setdefault("epsrel", config.numerics.quad_epsrel)
    if math.isinf(b) and kwargs.get("weight") in ("cos", "sin"):
        kwargs.setdefault("limlst", config.numerics.quad_limlst)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, abserr = integrate.quad(f, a, b, **kwargs)
    if not math.isfinite(value):
        raise NumericFailure(f"quadrature on [{a}, {b}] produced {value}", value)
    if caught:
        if abserr > accept * max(1.0, abs(value)):
            raise NumericFailure(
                f"quadrature on [{a}, {b}] did not converge (error estimate {abserr:.3g}): {caught[-1].message}",
                value,
            )
        logger.debug("quadrature on [%s, %s] warned but error estimate %.3g is acceptable", a, b, abserr)
    return value


def fourier_tail(f: Callable[[float], float], start: float, omega: float, kind: str = "cos", accept: float = 1e-9) -> float:
    """int_start^inf f(u) cos(omega u) du (or sin), QUADPACK Fourier-integral rule.

    omega = 0 falls back to a plain semi-infinite integral (cos) or zero (sin).
    """
    if omega == 0.0:
        if kind == "sin":
            return 0.0
        return checked_quad(f, start, math.inf, accept=accept)
    sign = 1.0
    if omega < 0:
        omega = -omega
        sign = -1.0 if kind == "sin" else 1.0
    return sign * checked_quad(f, start, math.inf, accept=accept, weight=kind, wvar=omega)
