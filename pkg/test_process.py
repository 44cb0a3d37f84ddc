"""
Process Tests for Levy Mixtures

Tests:
1. Transition chfs and Fourier inversion against known pairs
2. VG process: Laplace case, small-x regimes, convolution closure
3. T(3) process: closed form, integer-time sum, tails, large-t branch
4. Gaussian limit, user units, grids and the forward PIDE
"""

import math

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.distributions import laws, mixture, process
from src.errors import DomainError, SingularityError
from src.models import CauchyParams, NormalParams, ProcessSpec, SmallXRegime, StudentParams, VGParams


def test_transition_chf():
    """[phi(u)]^(dt/T) values."""
    print("\n" + "=" * 60)
    print("TEST 1: Transition chf and inversion")
    print("=" * 60)

    spec = ProcessSpec(law=StudentParams(nu=3.0))
    assert process.transition_chf(spec, 0.0, 3.3) == 1.0
    assert process.transition_chf(spec, 1.0, 2.0) == pytest.approx((2.0 / math.e) ** 2, rel=1e-13)

    vg = ProcessSpec(law=VGParams(lam=1.7))
    u = np.linspace(-5, 5, 11)
    assert np.allclose(process.transition_chf(vg, u, 1.0), (1.0 / (1.0 + u * u)) ** 1.7, rtol=1e-14)

    # time scale T rescales elapsed time
    slow = ProcessSpec(law=VGParams(lam=1.7), time_scale=2.0)
    assert np.allclose(process.transition_chf(slow, u, 2.0), process.transition_chf(vg, u, 1.0), rtol=1e-14)

    with pytest.raises(DomainError):
        process.transition_chf(spec, 1.0, 0.0)


def test_invert_known_pairs():
    """Cauchy and Gaussian pairs recovered by inversion."""
    x = np.linspace(-10.0, 10.0, 81)

    cauchy = process.invert_chf(lambda u: np.exp(-np.abs(u)), x)
    assert np.max(np.abs(cauchy.values - 1.0 / (math.pi * (1.0 + x * x)))) <= 1e-8

    gauss = process.invert_chf(lambda u: np.exp(-0.5 * u * u), x)
    assert np.max(np.abs(gauss.values - np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi))) <= 1e-9


def test_invert_student3_at_time_two():
    """Fourier inversion agrees with the exact mixture at t = 2."""
    x = np.linspace(-20.0, 20.0, 121)
    recovered = process.invert_chf(lambda u: laws.student_chf(StudentParams(nu=3.0), u) ** 2, x)
    assert np.max(np.abs(recovered.values - mixture.mixture_pdf(x, 2))) <= 1e-6


def test_invert_polynomial_tail():
    """A slowly decaying VG chf needs the oscillatory tail beyond the truncation point."""
    x = np.array([0.5, 1.0, 2.0, 4.0])
    p = VGParams(lam=0.75)
    recovered = process.invert_chf(lambda u: laws.vg_chf(p, u), x)
    assert np.allclose(recovered.values, laws.vg_pdf(p, x), rtol=1e-6, atol=1e-9)


def test_vg_process():
    """VG transition pdf: Laplace case, origin value and singular behaviour."""
    print("\n" + "=" * 60)
    print("TEST 2: VG process")
    print("=" * 60)

    x = np.linspace(-6.0, 6.0, 25)
    assert np.allclose(process.vg_transition_pdf(1.0, x, 1.0), 0.5 * np.exp(-np.abs(x)), rtol=1e-12)

    # Gamma(lam t - 1/2) / (2 sqrt(pi) Gamma(lam t)) at lam = 1, t = 2
    assert process.vg_transition_pdf(1.0, 0.0, 2.0) == pytest.approx(0.25, abs=1e-12)
    assert process.vg_origin_value(1.0, 2.0) == pytest.approx(0.25, abs=1e-12)
    with pytest.raises(SingularityError):
        process.vg_origin_value(1.0, 0.5)

    # lam t = 1/4: p ~ |x|^(-1/2) near the origin
    ratio = process.vg_transition_pdf(1.0, 1e-8, 0.25) / process.vg_transition_pdf(1.0, 1e-6, 0.25)
    assert ratio == pytest.approx(10.0, rel=0.01)
    with pytest.raises(SingularityError):
        process.vg_transition_pdf(1.0, 0.0, 0.25)

    assert process.vg_tail_exponent(2.0, 3.0) == 5.0


def test_vg_small_x_regime():
    """Three-way classification on a (lam, t) grid."""
    assert process.vg_small_x_regime(1.0, 0.25) == SmallXRegime.SINGULAR
    assert process.vg_small_x_regime(1.0, 0.5) == SmallXRegime.LOG_SINGULAR
    assert process.vg_small_x_regime(2.0, 10.0) == SmallXRegime.FINITE

    for lam in (0.1, 0.5, 1.0, 3.0):
        for t in (0.05, 0.3, 1.0, 7.0):
            product = 2 * lam * t
            regime = process.vg_small_x_regime(lam, t)
            if math.isclose(product, 1.0):
                assert regime == SmallXRegime.LOG_SINGULAR
            elif product < 1.0:
                assert regime == SmallXRegime.SINGULAR
            else:
                assert regime == SmallXRegime.FINITE


def test_vg_convolution_closure():
    """[VG(lam)]^2 inverts to VG(2 lam)."""
    x = np.linspace(-10.0, 10.0, 41)
    recovered = process.invert_chf(lambda u: laws.vg_chf(VGParams(lam=1.5), u) ** 2, x)
    assert np.max(np.abs(recovered.values - process.vg_transition_pdf(1.5, x, 2.0))) <= 1e-6


def test_student3_process():
    """Closed-form T(3) transition pdf."""
    print("\n" + "=" * 60)
    print("TEST 3: T(3) process")
    print("=" * 60)

    assert process.student3_transition_pdf(0.0, 1.0) == pytest.approx(2.0 / math.pi, rel=1e-13)
    assert process.student3_transition_pdf(0.0, 2.0) == pytest.approx(1.25 / math.pi, rel=1e-13)

    x = np.linspace(-10.0, 10.0, 101)
    assert np.allclose(
        process.student3_transition_pdf(x, 1.0), laws.student_pdf(StudentParams(nu=3.0), x), rtol=0, atol=1e-9
    )

    for n in (1, 2, 5, 9):
        assert np.allclose(
            process.student3_integer_time_pdf(x, n), process.student3_transition_pdf(x, float(n)), rtol=1e-10
        )
        assert np.allclose(process.student3_integer_time_pdf(x, n), mixture.mixture_pdf(x, n), rtol=1e-10)


def test_student3_tails():
    """x^-4 tail with coefficient 2t/pi."""
    assert process.student3_tail_coefficient(1.0) == pytest.approx(2.0 / math.pi)
    assert process.student3_tail_coefficient(0.0) == 0.0
    with pytest.raises(DomainError):
        process.student3_tail_coefficient(-1.0)

    for t in (0.5, 1.0, 2.0, 3.7):
        scaled = 200.0**4 * process.student3_transition_pdf(200.0, t) / process.student3_tail_coefficient(t)
        assert abs(scaled - 1.0) <= 0.01

    for t in (0.7, 2.0):
        x = 150.0
        assert process.student3_tail_expansion(x, t) == pytest.approx(process.student3_transition_pdf(x, t), rel=1e-6)


def test_student3_large_time_branch():
    """Direct quadrature agrees with the closed form where both apply."""
    for x in (0.0, 3.0, 25.0):
        closed = process._student3_closed_form(x, 100.0)
        direct = process._student3_direct(x, 100.0)
        assert direct == pytest.approx(closed, rel=1e-8)

    # beyond the switch the density stays normalised with variance t
    assert process.student3_normalization(200.0) == pytest.approx(1.0, abs=1e-5)


def test_student3_moments():
    """Normalisation and variance t of the T(3) process."""
    for t in (0.5, 2.0, 6.3):
        assert process.student3_normalization(t) == pytest.approx(1.0, abs=1e-8)
        assert process.student3_variance_check(t) == pytest.approx(t, rel=1e-4)


def test_gaussian_limit():
    """The rescaled T(3) process approaches the standard normal."""
    print("\n" + "=" * 60)
    print("TEST 4: Gaussian limit, units, grids, PIDE")
    print("=" * 60)

    u = np.linspace(-5.0, 5.0, 1001)
    distances = [process.gaussian_limit_distance(t, u) for t in (1.0, 10.0, 100.0, 1000.0, 1e4, 1e6)]
    print(f"  distances: {[f'{d:.3g}' for d in distances]}")
    assert distances[0] > 0
    assert all(a > b for a, b in zip(distances[:-1], distances[1:]))
    assert distances[4] <= 5e-3
    assert distances[5] <= 1e-3


def test_process_pdf_units():
    """User units map onto the reduced closed forms."""
    spec = ProcessSpec(law=NormalParams(sigma=2.0), time_scale=0.5)
    assert process.process_pdf(spec, 0.0, 2.0) == pytest.approx(1.0 / (4.0 * math.sqrt(2 * math.pi)), rel=1e-14)

    cauchy = ProcessSpec(law=CauchyParams(delta=0.5))
    assert process.process_pdf(cauchy, 1.0, 2.0) == pytest.approx(1.0 / (math.pi * 2.0), rel=1e-14)

    st3 = ProcessSpec(law=StudentParams(nu=3.0, delta=2.0))
    assert process.process_pdf(st3, 0.0, 2.0) == pytest.approx(1.25 / (2.0 * math.pi), rel=1e-13)

    # no closed form: falls back to inversion
    st5 = ProcessSpec(law=StudentParams(nu=5.0))
    x = np.array([-2.0, 0.0, 0.5, 3.0])
    assert np.allclose(process.process_pdf(st5, x, 1.0), laws.student_pdf(StudentParams(nu=5.0), x), atol=1e-8)


def test_grids():
    """Grid validation, parallel evaluation and singular points."""
    with pytest.raises(DomainError):
        process.GridFunction(np.array([0.0, 1.0, 1.0]), np.zeros(3))

    xs = np.linspace(-3.0, 3.0, 50)
    fn = lambda chunk: process.student3_transition_pdf(chunk, 1.5)  # noqa: E731
    assert np.array_equal(process.evaluate_grid(fn, xs, workers=1), process.evaluate_grid(fn, xs, workers=4))

    grid = process.pdf_grid(ProcessSpec(law=VGParams(lam=0.25)), np.linspace(-1.0, 1.0, 5), 1.0)
    assert grid.xs.tolist() == [-1.0, -0.5, 0.5, 1.0]
    table = grid.to_table("x", "pdf")
    assert table.header == ["x", "pdf"]
    assert len(table.rows) == 4


def test_forward_pide():
    """d/dt p equals the jump integral for VG and T(3)."""
    for kind in ("vg", "student3"):
        for x in (0.5, 2.0):
            residual = process.pide_residual(kind, x, 2.0)
            print(f"  {kind} x={x}: residual {residual:.2e}")
            assert abs(residual) <= 1e-5
    with pytest.raises(DomainError):
        process.pide_residual("normal", 1.0, 1.0)


if __name__ == "__main__":
    test_transition_chf()
    test_invert_known_pairs()
    test_invert_student3_at_time_two()
    test_invert_polynomial_tail()
    test_vg_process()
    test_vg_small_x_regime()
    test_vg_convolution_closure()
    test_student3_process()
    test_student3_tails()
    test_student3_large_time_branch()
    test_student3_moments()
    test_gaussian_limit()
    test_process_pdf_units()
    test_grids()
    test_forward_pide()
    print("\nAll process tests passed.")
