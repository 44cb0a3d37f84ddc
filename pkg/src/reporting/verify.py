"""Verification suites: identities and oracle comparisons for every module.

mpmath at 50 digits is the reference for special functions; Monte Carlo
checks use 3-sigma bands.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np
from scipy import stats

from ..config import config
from ..distributions import laws, mixture, process, triplet
from ..errors import LevyMixError
from ..kernel import specfun
from ..kernel.quadrature import checked_quad
from ..models import (
    CauchyParams,
    GHParams,
    NoiseKind,
    NormalParams,
    ProcessSpec,
    ReferenceProcess,
    SmallXRegime,
    StudentParams,
    SuiteName,
    VGParams,
)
from ..simulation import noise, ou

logger = logging.getLogger(__name__)

mpmath.mp.dps = 50

Check = Callable[[], tuple[bool, str]]


@dataclass
class CheckResult:
    """Outcome of one verification check."""
    suite: SuiteName
    name: str
    passed: bool
    detail: str
    seconds: float


def _within(value: float, target: float, tol: float, relative: bool = False) -> tuple[bool, str]:
    err = abs(value - target)
    if relative:
        err /= abs(target)
    kind = "rel" if relative else "abs"
    return err <= tol, f"{kind} err {err:.3g} (tol {tol:g})"


def _worst(errors: list[float], tol: float) -> tuple[bool, str]:
    worst = max(errors)
    return worst <= tol, f"max err {worst:.3g} (tol {tol:g})"


def _law_pair(law) -> tuple[Callable, Callable]:
    return (lambda u: laws.law_chf(law, u)), (lambda u: laws.law_chf_derivative(law, u))


class VerificationRunner:
    """Runs the checks of one or all suites.

    Args:
        quick: Smaller Monte Carlo samples and shorter identity ranges.
        seed: Seed for the Monte Carlo checks.
    """

    def __init__(self, quick: bool = False, seed: Optional[int] = None):
        self.quick = quick
        self.seed = config.simulation.seed if seed is None else seed
        self._suites: dict[SuiteName, Callable[[], list[tuple[str, Check]]]] = {
            SuiteName.SPECFUN: self._specfun_checks,
            SuiteName.LAWS: self._laws_checks,
            SuiteName.PROCESS: self._process_checks,
            SuiteName.MIXTURE: self._mixture_checks,
            SuiteName.TRIPLET: self._triplet_checks,
            SuiteName.SIMULATE: self._simulate_checks,
        }

    def run(self, suite: SuiteName = SuiteName.ALL) -> list[CheckResult]:
        suite = SuiteName(suite)
        selected = list(self._suites) if suite == SuiteName.ALL else [suite]
        results = []
        for name in selected:
            for label, check in self._suites[name]():
                results.append(self._run_check(name, label, check))
        return results

    def _run_check(self, suite: SuiteName, label: str, check: Check) -> CheckResult:
        logger.info("verify %s: %s", suite.value, label)
        start = time.perf_counter()
        try:
            passed, detail = check()
        except (LevyMixError, ArithmeticError, ValueError) as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        return CheckResult(suite, label, bool(passed), detail, time.perf_counter() - start)

    # ------------------------------------------------------------------
    # Suites
    # ------------------------------------------------------------------

    def _specfun_checks(self) -> list[tuple[str, Check]]:
        def k_half():
            errors = [
                abs(specfun.bessel_k_half(n, z) / float(mpmath.besselk(n + 0.5, z)) - 1.0)
                for n in range(5)
                for z in (0.1, 1.0, 7.5)
            ]
            return _worst(errors, 1e-13)

        def k_real():
            errors = [
                abs(specfun.bessel_k(nu, z) / float(mpmath.besselk(nu, z)) - 1.0)
                for nu in (0.0, 0.3, 1.7, 4.0)
                for z in (0.05, 2.0, 30.0)
            ]
            return _worst(errors, 1e-12)

        def gamma_complex():
            errors = []
            for a, z in ((3.0, 2 + 1j), (1.5, 0.3 + 0.2j), (4.7, 4.7 + 10j), (60.0, 0.01 + 0j)):
                exact = complex(mpmath.gammainc(a, z))
                errors.append(abs(specfun.upper_gamma_complex(a, z) - exact) / abs(exact))
            return _worst(errors, 1e-10)

        def si_ci():
            errors = []
            for x in (0.5, 1.0, 20.0):
                errors.append(abs(specfun.sin_integral(x) - float(mpmath.si(x) - mpmath.pi / 2)))
                errors.append(abs(specfun.cos_integral(x) - float(mpmath.ci(x))))
            return _worst(errors, 1e-14)

        return [
            ("bessel_k_half vs mpmath", k_half),
            ("bessel_k vs mpmath", k_real),
            ("upper_gamma_complex vs mpmath", gamma_complex),
            ("si/ci vs mpmath", si_ci),
        ]

    def _laws_checks(self) -> list[tuple[str, Check]]:
        def vg_normalised():
            p = VGParams(lam=1.5)
            total = 2.0 * _half_line_integral(lambda x: laws.vg_pdf(p, x))
            return _within(total, 1.0, 1e-9)

        def student3_chf():
            u = np.array([0.5, 1.0, 3.0])
            values = laws.student_chf(StudentParams(nu=3.0), u)
            return _worst(list(np.abs(values - np.exp(-u) * (1 + u))), 1e-13)

        def odd_chf():
            u = np.linspace(0.0, 10.0, 21)
            errors = [
                float(np.max(np.abs(laws.student_chf_odd(n, u) - laws.student_chf(StudentParams(nu=2 * n + 1), u))))
                for n in range(5)
            ]
            return _worst(errors, 1e-12)

        def gh_normalised():
            p = GHParams(lam=0.7, alpha=1.3, delta=0.8)
            return _within(2.0 * _half_line_integral(lambda x: laws.gh_pdf(p, x)), 1.0, 1e-9)

        def moments():
            ok_vg = _within(laws.vg_variance(VGParams(lam=2.0)), 4.0, 1e-14)
            ok_st = _within(laws.student_variance(StudentParams(nu=5.0)), 1.0 / 3.0, 1e-14)
            return ok_vg[0] and ok_st[0], f"vg {ok_vg[1]}; student {ok_st[1]}"

        return [
            ("vg_pdf integrates to 1", vg_normalised),
            ("student_chf nu=3 closed form", student3_chf),
            ("student_chf_odd polynomial form", odd_chf),
            ("gh_pdf integrates to 1", gh_normalised),
            ("variances", moments),
        ]

    def _process_checks(self) -> list[tuple[str, Check]]:
        def origin_value():
            return _within(float(process.student3_transition_pdf(0.0, 2.0)), 1.25 / math.pi, 1e-12)

        def tail():
            errors = [
                abs(200.0**4 * float(process.student3_transition_pdf(200.0, t)) * math.pi / (2 * t) - 1.0)
                for t in (0.5, 1.0, 2.0, 3.7)
            ]
            return _worst(errors, 0.01)

        def vg_closure():
            xs = np.linspace(-10.0, 10.0, 41)
            chf = lambda u: laws.vg_chf(VGParams(lam=1.5), u) ** 2  # noqa: E731
            recovered = process.invert_chf(chf, xs).values
            exact = process.vg_transition_pdf(1.5, xs, 2.0)
            return _worst(list(np.abs(recovered - exact)), 1e-6)

        def vg_regimes():
            expected = {
                (0.2, 1.0): SmallXRegime.SINGULAR,
                (0.5, 1.0): SmallXRegime.LOG_SINGULAR,
                (0.25, 2.0): SmallXRegime.LOG_SINGULAR,
                (1.0, 2.0): SmallXRegime.FINITE,
            }
            bad = [key for key, regime in expected.items() if process.vg_small_x_regime(*key) != regime]
            ok, detail = _within(process.vg_origin_value(1.0, 2.0), 0.25, 1e-10)
            return ok and not bad, f"misclassified {bad}; origin {detail}"

        def gaussian_limit():
            u = np.linspace(-5.0, 5.0, 1001)
            d4 = process.gaussian_limit_distance(1e4, u)
            d6 = process.gaussian_limit_distance(1e6, u)
            return d4 <= 5e-3 and d6 <= 1e-3 and d6 < d4, f"t=1e4: {d4:.3g}, t=1e6: {d6:.3g}"

        def student3_moments():
            mass = [abs(process.student3_normalization(t) - 1.0) for t in (0.5, 2.0, 6.3)]
            spread = [abs(process.student3_variance_check(t) / t - 1.0) for t in (0.5, 2.0, 6.3)]
            ok_mass, mass_detail = _worst(mass, 1e-8)
            ok_spread, spread_detail = _worst(spread, 1e-4)
            return ok_mass and ok_spread, f"mass {mass_detail}; variance {spread_detail}"

        def forward_pide():
            residuals = [abs(process.pide_residual(kind, x, 2.0)) for kind in ("vg", "student3") for x in (0.5, 2.0)]
            return _worst(residuals, 1e-5)

        def normal_units():
            spec = ProcessSpec(law=NormalParams(sigma=2.0), time_scale=0.5)
            return _within(float(process.process_pdf(spec, 0.0, 2.0)), 1.0 / (4.0 * math.sqrt(2 * math.pi)), 1e-14)

        return [
            ("student3 p(0, 2) = 1.25/pi", origin_value),
            ("student3 x^-4 tail", tail),
            ("vg convolution closure", vg_closure),
            ("vg small-x regimes", vg_regimes),
            ("gaussian limit", gaussian_limit),
            ("student3 normalisation and variance", student3_moments),
            ("forward equation residual", forward_pide),
            ("user units rescaling", normal_units),
        ]

    def _mixture_checks(self) -> list[tuple[str, Check]]:
        top = 40 if self.quick else 200
        times = (1, 2) if self.quick else (1, 2, 3, 4, 5, 6)

        def identities():
            failed = [n for n in range(1, top + 1) if not all(mixture.mixture_weights(n).check_identities().values())]
            return not failed, f"n=1..{top}, failures at {failed[:5]}"

        def against_closed_form():
            x = np.linspace(-20.0, 20.0, 81)
            errors = [
                float(np.max(np.abs(mixture.mixture_pdf(x, n) - process.student3_integer_time_pdf(x, n))))
                for n in (1, 3, 7)
            ]
            return _worst(errors, 1e-12)

        def against_fourier():
            x = np.linspace(-20.0, 20.0, 81)
            errors = []
            for n in times:
                chf = lambda u, n=n: laws.student_chf(StudentParams(nu=3.0), u) ** n  # noqa: E731
                errors.append(float(np.max(np.abs(mixture.mixture_pdf(x, n) - process.invert_chf(chf, x).values))))
            return _worst(errors, 1e-6)

        def tail():
            errors = [
                abs(500.0**4 * float(mixture.mixture_pdf(500.0, n)) * math.pi / (2 * n) - 1.0) for n in range(1, 7)
            ]
            return _worst(errors, 5e-3)

        return [
            ("exact weight identities", identities),
            ("mixture vs finite sum", against_closed_form),
            ("mixture vs Fourier inversion", against_fourier),
            ("mixture x^-4 tail", tail),
        ]

    def _triplet_checks(self) -> list[tuple[str, Check]]:
        u_grid = (0.5, 1.0, 3.0)
        student = StudentParams(nu=3.0)

        def vg_levy_khinchin():
            chf = lambda u: laws.vg_chf(VGParams(lam=1.0), u)  # noqa: E731
            return _within(triplet.levy_khinchin_residual(triplet.closed_form_triplet("vg"), chf, u_grid), 0.0, 1e-8)

        def student3_levy_khinchin():
            chf = lambda u: laws.student_chf(student, u)  # noqa: E731
            residual = triplet.levy_khinchin_residual(triplet.closed_form_triplet("student3"), chf, u_grid)
            return _within(residual, 0.0, 1e-6)

        def cauchy_levy_khinchin():
            cauchy = triplet.reference_triplet(ReferenceProcess.CAUCHY)
            residual = triplet.levy_khinchin_residual(cauchy, lambda u: np.exp(-np.abs(np.asarray(u))), u_grid)
            return _within(residual, 0.0, 1e-8)

        def student_identity():
            errors = [abs(triplet.student3_jump_integral(u) - math.log1p(u)) for u in u_grid]
            return _worst(errors, 1e-6)

        def numeric_densities():
            errors = []
            for z in (0.25, 1.0, 5.0):
                for lam in (0.5, 1.0, 2.0):
                    w = triplet.numeric_w(*_law_pair(VGParams(lam=lam)), z)
                    errors.append(abs(w / triplet.w_vg(z, lam) - 1.0))
                w = triplet.numeric_w(*_law_pair(student), z)
                errors.append(abs(w / triplet.w_student3(z) - 1.0))
            return _worst(errors, 1e-3)

        def no_diffusion():
            values = [triplet.numeric_b(*_law_pair(student))]
            values += [triplet.numeric_b(*_law_pair(VGParams(lam=lam))) for lam in (0.5, 1.0, 2.0)]
            return _worst([abs(b) for b in values], 1e-3)

        def wiener():
            pair = _law_pair(NormalParams(sigma=1.0))
            a, b = triplet.numeric_a(*pair), triplet.numeric_b(*pair)
            w = triplet.numeric_w(*pair, 1.0)
            return _worst([abs(a), abs(b - 1.0), abs(w)], 1e-3)

        def cauchy():
            pair = _law_pair(CauchyParams(delta=1.0))
            a, b = triplet.numeric_a(*pair), triplet.numeric_b(*pair)
            w = triplet.numeric_w(*pair, 2.0)
            return _worst([abs(a), abs(b), abs(w - 1.0 / (4.0 * math.pi))], 1e-3)

        def infinite_activity():
            p_vg = triplet.infinite_activity_exponent(lambda z: triplet.w_vg(z, 1.0))
            p_st = triplet.infinite_activity_exponent(triplet.w_student3)
            ok = abs(p_vg - 1.0) <= 0.05 and abs(p_st - 2.0) <= 0.05
            return ok, f"exponents vg {p_vg:.3f} (1), student3 {p_st:.3f} (2)"

        return [
            ("vg Levy-Khinchin residual", vg_levy_khinchin),
            ("student3 Levy-Khinchin residual", student3_levy_khinchin),
            ("cauchy Levy-Khinchin residual", cauchy_levy_khinchin),
            ("student3 jump identity", student_identity),
            ("numeric W vs closed forms", numeric_densities),
            ("numeric B = 0 for vg and student3", no_diffusion),
            ("wiener A, B and W", wiener),
            ("cauchy A, B and W", cauchy),
            ("infinite activity", infinite_activity),
        ]

    def _simulate_checks(self) -> list[tuple[str, Check]]:
        size = 100_000 if self.quick else 1_000_000
        n_paths = 1000 if self.quick else config.simulation.n_paths

        def moments():
            rng = noise.path_generator(self.seed, 0)
            failures = []
            for kind, kurtosis in ((NoiseKind.NORMAL01, 3.0), (NoiseKind.VG_1_SQRT2, 6.0), (NoiseKind.STUDENT3_1, None)):
                draws = noise.sample_increments(kind, rng, size)
                if abs(draws.mean()) > 3.0 / math.sqrt(size):
                    failures.append(f"{kind.value} mean")
                if kurtosis is not None and abs(draws.var() - 1.0) > 3.0 * math.sqrt((kurtosis - 1.0) / size):
                    failures.append(f"{kind.value} variance")
            return not failures, f"N={size}, failures {failures}"

        def student_ks():
            draws = noise.sample_increments(NoiseKind.STUDENT3_1, noise.path_generator(self.seed, 1), size)
            statistic = stats.kstest(draws, lambda x: noise.noise_cdf(NoiseKind.STUDENT3_1, x)).statistic
            return statistic <= 1.95 / math.sqrt(size), f"KS {statistic:.3g} (bound {1.95 / math.sqrt(size):.3g})"

        def escape_ordering():
            q = config.simulation.q
            fractions = [
                ou.escape_stats(kind, 0.1, q, n_paths, 5000, seed=self.seed).escape_fraction for kind in NoiseKind
            ]
            gaps = []
            for low, high in zip(fractions[:-1], fractions[1:]):
                sd = math.sqrt((low * (1 - low) + high * (1 - high)) / n_paths)
                gaps.append((high - low) / sd if sd > 0 else 0.0)
            detail = f"q={q}, fractions {[round(f, 4) for f in fractions]}, gaps {[round(g, 1) for g in gaps]} sd"
            return all(g > 3.0 for g in gaps), detail

        def worker_independence():
            one = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 6.0, 300, 500, seed=self.seed, workers=1)
            many = ou.escape_stats(NoiseKind.STUDENT3_1, 0.1, 6.0, 300, 500, seed=self.seed, workers=4)
            return one == many, f"workers=1 {one.escape_fraction}, workers=4 {many.escape_fraction}"

        return [
            ("sampler mean and variance", moments),
            ("student3 KS test", student_ks),
            ("escape ordering normal < vg < student", escape_ordering),
            ("results independent of workers", worker_independence),
        ]


def _half_line_integral(f: Callable[[float], float]) -> float:
    """int_0^inf f dx, split at 1 so a peak at the origin is resolved."""
    return checked_quad(lambda x: float(f(x)), 0.0, 1.0) + checked_quad(lambda x: float(f(x)), 1.0, math.inf)


def format_results(results: list[CheckResult]) -> str:
    """Plain-text pass/fail table."""
    width = max((len(r.name) for r in results), default=10)
    lines = [f"{'suite':<9} {'check':<{width}}  result  detail", "-" * (width + 40)]
    for r in results:
        lines.append(f"{r.suite.value:<9} {r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    failed = sum(not r.passed for r in results)
    lines.append("-" * (width + 40))
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    return "\n".join(lines)
