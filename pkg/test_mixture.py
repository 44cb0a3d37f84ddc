"""
Mixture Weight Tests for Levy Mixtures

Tests:
1. Exact weights for small n
2. Rational identities for every n <= 200
3. Mixture density against closed forms and Fourier inversion
4. Weight table emission
"""

from fractions import Fraction

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.distributions import laws, mixture, process
from src.errors import DomainError
from src.models import StudentParams


def test_small_n_weights():
    """q_1 and q_2 in closed form."""
    print("\n" + "=" * 60)
    print("TEST 1: Small-n weights")
    print("=" * 60)

    assert mixture.mixture_weights(1).weights == (Fraction(0), Fraction(1))
    q2 = mixture.mixture_weights(2)
    assert q2.weights == (Fraction(0), Fraction(1, 4), Fraction(3, 4))
    assert q2[1] == Fraction(1, 4)
    assert q2.as_floats() == [0.0, 0.25, 0.75]

    q3 = mixture.mixture_weights(3)
    print(f"  q_3 = {[str(q) for q in q3.weights]}")
    assert sum(q3.weights) == 1


def test_identities_up_to_200():
    """Structural zero, positivity, normalisation and the inverse moment, exactly."""
    print("\n" + "=" * 60)
    print("TEST 2: Exact identities, n = 1..200")
    print("=" * 60)

    last = []
    for n in range(1, 201):
        table = mixture.mixture_weights(n)
        checks = table.check_identities()
        assert all(checks.values()), (n, checks)
        last.append(table[n])

    # q_n(n) decreases in n from n = 2 on
    assert all(a > b for a, b in zip(last[1:-1], last[2:]))

    # weights that are normalised but wrong fail both moment identities
    tampered = mixture.MixtureWeights(2, (Fraction(0), Fraction(1, 2), Fraction(1, 2))).check_identities()
    assert tampered["normalized"] and tampered["positive"]
    assert not tampered["inverse_moment"]
    assert not tampered["second_moment"]


def test_invalid_times():
    for n in (0, 10_001, 2.5, -3):
        with pytest.raises(DomainError):
            mixture.mixture_weights(n)


def test_mixture_pdf():
    """Mixture density agrees with independent routes."""
    print("\n" + "=" * 60)
    print("TEST 3: Mixture density")
    print("=" * 60)

    x = np.linspace(-20.0, 20.0, 161)
    assert np.allclose(mixture.mixture_pdf(x, 1), laws.student_pdf(StudentParams(nu=3.0), x), rtol=1e-13, atol=0)
    assert mixture.mixture_pdf(0.0, 2) == pytest.approx(1.25 / np.pi, rel=1e-14)

    for n in (1, 2, 3, 4, 5, 6):
        chf = lambda u, n=n: laws.student_chf(StudentParams(nu=3.0), u) ** n  # noqa: E731
        err = np.max(np.abs(mixture.mixture_pdf(x, n) - process.invert_chf(chf, x).values))
        print(f"  n={n}: sup error vs inversion {err:.2e}")
        assert err <= 1e-6

    assert np.allclose(mixture.mixture_pdf(x, 12), process.student3_transition_pdf(x, 12.0), rtol=1e-8)

    # x^4 p(x, n | 3) -> 2n/pi
    for n in range(1, 7):
        for far in (-500.0, 500.0):
            assert far**4 * mixture.mixture_pdf(far, n) == pytest.approx(2.0 * n / np.pi, rel=5e-3)


def test_weights_table():
    """Rows (n, k, decimal, rational)."""
    print("\n" + "=" * 60)
    print("TEST 4: Weight table")
    print("=" * 60)

    table = mixture.weights_csv(5)
    assert table.header == ["n", "k", "q_decimal", "q_rational"]
    assert len(table.rows) == sum(n + 1 for n in range(1, 6))

    by_n = {}
    for n, k, decimal, rational in table.rows:
        by_n.setdefault(n, []).append((k, decimal, rational))

    assert [row for row in by_n[1] if row[1] != 0.0] == [(1, 1.0, "1/1")]
    assert by_n[2][1:] == [(1, 0.25, "1/4"), (2, 0.75, "3/4")]
    assert [k for k, _, _ in by_n[5]] == list(range(6))
    assert by_n[5][0][1] == 0.0

    with pytest.raises(DomainError):
        mixture.weights_csv(0)


if __name__ == "__main__":
    test_small_n_weights()
    test_identities_up_to_200()
    test_invalid_times()
    test_mixture_pdf()
    test_weights_table()
    print("\nAll mixture tests passed.")
