"""Exact mixture weights of the T(3) process at integer times.

p(x, n | 3) = sum_k q_n(k) f(x | 2k+1, n): a convex combination of Student
densities whose weights are rational numbers computed here without rounding.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError
from ..models import StudentParams, Table
from .laws import student_pdf

logger = logging.getLogger(__name__)

MAX_TIME = 10_000


@dataclass(frozen=True)
class MixtureWeights:
    """Weights q_n(k) for k = 0..n, stored densely with the structural zero at k = 0."""
    n: int
    weights: tuple[Fraction, ...]

    def __getitem__(self, k: int) -> Fraction:
        return self.weights[k]

    def as_floats(self) -> list[float]:
        return [float(q) for q in self.weights]

    def check_identities(self) -> dict[str, bool]:
        """The exact identities every weight table satisfies."""
        n, q = self.n, self.weights
        inverse_moment = sum((q[k] / (2 * k - 1) for k in range(1, n + 1)), Fraction(0))
        # component k has variance n^2 / (2k - 1); the mixture variance is n
        second_moment = sum((q[k] * Fraction(n * n, 2 * k - 1) for k in range(1, n + 1)), Fraction(0))
        return {
            "structural_zero": q[0] == 0,
            "positive": all(q[k] > 0 for k in range(1, n + 1)),
            "normalized": sum(q, Fraction(0)) == 1,
            "inverse_moment": inverse_moment == Fraction(1, n),
            "second_moment": second_moment == n,
        }


def _weight_numerator(n: int, k: int) -> int:
    """sum_j C(n,j) C(2k+1,j) C(j,k) (j+1)! (-1)^j (2n)^(2k+1-j).

    C(j, k) vanishes for j < k and C(n, j) for j > n, so j runs over k..min(n, 2k+1).
    """
    top = 2 * k + 1
    two_n = 2 * n
    total = 0
    factorial = math.factorial(k + 1)  # (j+1)! at j = k
    for j in range(k, min(n, top) + 1):
        if j > k:
            factorial *= j + 1
        term = math.comb(n, j) * math.comb(top, j) * math.comb(j, k) * factorial * two_n ** (top - j)
        total += -term if j % 2 else term
    return total


def mixture_weights(n: int) -> MixtureWeights:
    """Exact q_n(k | 3) for k = 0..n.

    q_n(k) = (-1)^k / (2k+1) sum_j C(n,j) C(2k+1,j) C(j,k) (j+1)! (-1/2n)^j
    """
    if int(n) != n or not 1 <= n <= MAX_TIME:
        raise DomainError(f"time n must be an integer in [1, {MAX_TIME}], got {n}")
    n = int(n)
    weights = []
    for k in range(n + 1):
        top = 2 * k + 1
        numerator = _weight_numerator(n, k)
        if k % 2:
            numerator = -numerator
        weights.append(Fraction(numerator, top * (2 * n) ** top))
    return MixtureWeights(n=n, weights=tuple(weights))


def mixture_pdf(x, n: int):
    """p(x, n | 3) as sum_{k>=1} q_n(k) f(x | 2k+1, n)."""
    table = mixture_weights(n)
    x_arr = np.asarray(x, dtype=float)
    total = np.zeros(x_arr.shape)
    for k in range(1, table.n + 1):
        q = float(table[k])
        if q == 0.0:
            continue
        total = total + q * np.asarray(student_pdf(StudentParams(nu=2 * k + 1, delta=table.n), x_arr))
    if np.ndim(x) == 0:
        return float(total)
    return total


def weights_csv(n_max: int) -> Table:
    """Rows (n, k, q decimal, q as reduced p/q) for every n <= n_max."""
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be a positive integer, got {n_max}")
    rows = []
    for n in range(1, int(n_max) + 1):
        table = mixture_weights(n)
        for k, q in enumerate(table.weights):
            rows.append((n, k, float(q), f"{q.numerator}/{q.denominator}"))
        if n % 50 == 0:
            logger.info("weights computed up to n=%d", n)
    return Table(header=["n", "k", "q_decimal", "q_rational"], rows=rows)