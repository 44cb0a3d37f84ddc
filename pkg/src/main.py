"""
Levy Mixtures - Command Line Interface

Usage:
    python -m src.main pdf --law student3 --t 2 --grid -10:10:401 --out p.csv
    python -m src.main weights --n 5 --out w.csv
    python -m src.main triplet --law vg --lam 1 --grid 0.25:5:20
    python -m src.main verify --suite all [--quick]
    python -m src.main simulate --noise student3_1 --k 0.1 --q 8 --paths 10000
    python -m src.main figure --figure fig1
"""

import argparse
import contextlib
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from dotenv import dotenv_values
from pydantic import ValidationError

from .config import config
from .distributions import laws, mixture, process, triplet
from .errors import ConfigError, DomainError, LevyMixError, NumericFailure, VerificationFailure
from .models import CommandName, ForceSpec, LawName, ProcessSpec, ReferenceProcess, RunConfig, Table
from .reporting import emit, figures, verify
from .simulation import ou

logger = logging.getLogger(__name__)

# Options whose values may start with "-" (negative grid bounds).
_VALUE_OPTIONS = ("--grid",)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so exit codes stay ours."""

    def error(self, message: str):
        raise ConfigError(message)


def _join_values(argv: Sequence[str]) -> list[str]:
    """Rewrite `--grid -10:10:401` as `--grid=-10:10:401`."""
    out: list[str] = []
    it = iter(argv)
    for arg in it:
        if arg in _VALUE_OPTIONS:
            value = next(it, None)
            if value is None:
                raise ConfigError(f"{arg} needs a value")
            out.append(f"{arg}={value}")
        else:
            out.append(arg)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="levymix",
        description="Levy Mixtures - VG and Student Levy processes: densities, mixture weights, triplets, simulation",
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # Options shared by every command; default None so config files are only overridden when given
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("--out", "-o", type=Path, help="Output file (stdout when omitted)")
    common.add_argument("--seed", type=int)
    common.add_argument("--rtol", type=float)
    common.add_argument("--truncation-m", dest="truncation_m", type=float)

    law = argparse.ArgumentParser(add_help=False)
    law.add_argument("--law", choices=[name.value for name in LawName])
    for flag in ("lam", "alpha", "nu", "delta", "sigma"):
        law.add_argument(f"--{flag}", type=float)
    law.add_argument("--grid", help="lo:hi:count")

    pdf = subparsers.add_parser("pdf", parents=[common, law], help="Transition pdf on a grid")
    pdf.add_argument("--t", type=float, help="Elapsed time")

    chf = subparsers.add_parser("chf", parents=[common, law], help="Transition chf on a grid")
    chf.add_argument("--t", type=float, help="Elapsed time")

    weights = subparsers.add_parser("weights", parents=[common], help="Exact T(3) mixture weights")
    weights.add_argument("--n", type=int, help="Largest integer time")

    trip = subparsers.add_parser("triplet", parents=[common, law], help="Levy density W(z) and (A, B)")
    trip.add_argument("--numeric", action="store_true", default=None, help="Extract from the chf")

    ver = subparsers.add_parser("verify", parents=[common], help="Run verification suites")
    ver.add_argument("--suite", choices=["specfun", "laws", "process", "mixture", "triplet", "simulate", "all"])
    ver.add_argument("--quick", action="store_true", default=None, help="Smaller Monte Carlo sizes")

    sim = subparsers.add_parser("simulate", parents=[common], help="OU paths or escape statistics")
    sim.add_argument("--noise", choices=["normal01", "vg_1_sqrt2", "student3_1"])
    sim.add_argument("--k", type=float)
    sim.add_argument("--q", type=float)
    sim.add_argument("--steps", type=int)
    sim.add_argument("--paths", type=int, help="Escape statistics over this many paths")
    sim.add_argument("--y0", type=float)

    fig = subparsers.add_parser("figure", parents=[common], help="Figure data presets")
    fig.add_argument("--figure", choices=["fig1", "fig2", "fig3"])

    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Config file values, overridden by explicit flags, validated into RunConfig."""
    values: dict[str, object] = {}
    if args.config is not None:
        if not args.config.is_file():
            raise ConfigError(f"config file not found: {args.config}")
        values.update({k: v for k, v in dotenv_values(args.config).items() if v is not None})
        unknown = set(values) - set(RunConfig.model_fields)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    flags = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    values.update(flags)
    return RunConfig.model_validate(values)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _positive_grid(xs: np.ndarray) -> np.ndarray:
    xs = xs[xs != 0.0]
    if xs.size == 0:
        raise DomainError("triplet grid must contain non-zero points")
    return xs


def _triplet(cfg: RunConfig) -> triplet.LevyTriplet:
    if cfg.numeric:
        law = cfg.law_params()
        return triplet.numeric_triplet(
            lambda u: laws.law_chf(law, u), lambda u: laws.law_chf_derivative(law, u), cfg.truncation_m
        )
    if cfg.law == LawName.VG:
        if cfg.alpha != 1.0:
            raise DomainError("closed-form VG triplet is in reduced units (alpha = 1); use --numeric")
        return triplet.closed_form_triplet("vg", cfg.lam)
    if cfg.law == LawName.STUDENT3:
        if cfg.delta != 1.0:
            raise DomainError("closed-form T(3) triplet is in reduced units (delta = 1); use --numeric")
        return triplet.closed_form_triplet("student3")
    if cfg.law in (LawName.WIENER, LawName.NORMAL):
        return triplet.reference_triplet(ReferenceProcess.WIENER, a=cfg.sigma)
    if cfg.law == LawName.CAUCHY:
        return triplet.reference_triplet(ReferenceProcess.CAUCHY, a=cfg.delta)
    raise DomainError(f"no closed-form triplet for {cfg.law.value}; use --numeric")


@contextlib.contextmanager
def _inversion_rtol(rtol: float):
    """Fourier inversion tolerance for the duration of one run."""
    saved = config.numerics.inversion_rtol
    config.numerics.inversion_rtol = rtol
    try:
        yield
    finally:
        config.numerics.inversion_rtol = saved


def run(cfg: RunConfig) -> int:
    """Execute one command and write its artifact. Returns the exit status."""
    command = cfg.command
    table: Optional[Table] = None

    if command == CommandName.PDF:
        spec = ProcessSpec(law=cfg.law_params())
        table = process.pdf_grid(spec, cfg.grid.points(), cfg.t).to_table("x", "pdf")
    elif command == CommandName.CHF:
        spec = ProcessSpec(law=cfg.law_params())
        us = cfg.grid.points()
        values = np.atleast_1d(process.transition_chf(spec, us, cfg.t))
        table = Table(header=["u", "chf"], rows=list(zip(us.tolist(), values.tolist())))
    elif command == CommandName.WEIGHTS:
        table = mixture.weights_csv(cfg.n)
    elif command == CommandName.TRIPLET:
        trip = _triplet(cfg)
        zs = _positive_grid(cfg.grid.points())
        table = Table(header=["z", "w"], rows=[(float(z), float(trip.density(float(z)))) for z in zs])
        print(f"Triplet ({trip.label}): A = {trip.drift!r}, B = {trip.diffusion!r}", file=sys.stderr)
    elif command == CommandName.VERIFY:
        results = verify.VerificationRunner(quick=cfg.quick, seed=cfg.seed).run(cfg.suite)
        print(verify.format_results(results))
        if not all(r.passed for r in results):
            raise VerificationFailure(f"{sum(not r.passed for r in results)} check(s) failed")
        return 0
    elif command == CommandName.SIMULATE:
        if cfg.paths is not None:
            stats = ou.escape_stats(
                cfg.noise, cfg.k, cfg.q or config.simulation.q, cfg.paths, cfg.steps, seed=cfg.seed, y0=cfg.y0
            )
            emit.write_json(stats, cfg.out)
            if cfg.out:
                print(f"Escape statistics saved to: {cfg.out}")
            return 0
        record = ou.ou_path(cfg.noise, ForceSpec(k=cfg.k, q=cfg.q), cfg.steps, y0=cfg.y0, seed=cfg.seed)
        table = record.to_table()
    elif command == CommandName.FIGURE:
        table = figures.figure_table(cfg.figure, cfg.seed)

    emit.write_table(table, cfg.out, command.value, cfg.seed)
    if cfg.out:
        print(f"{command.value.capitalize()} data saved to: {cfg.out}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=config.log_level, format="%(levelname)s %(name)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser()
        args = parser.parse_args(_join_values(argv))
        if args.command is None:
            parser.print_help()
            raise ConfigError("no command given")
        cfg = load_run_config(args)
        with _inversion_rtol(cfg.rtol):
            return run(cfg)
    except VerificationFailure as exc:
        print(f"Verification failed: {exc}", file=sys.stderr)
        return 3
    except (NumericFailure, ArithmeticError) as exc:
        print(f"Numeric failure: {exc}", file=sys.stderr)
        return 2
    except (LevyMixError, ValidationError, ValueError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
