"""
Command Line Tests for Levy Mixtures

Tests:
1. weights and pdf artifacts
2. Config files and flag precedence
3. Exit codes 1, 2 and 3, and per-run tolerances
4. verify, simulate and figure commands
"""

import csv
import json
import math

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.config import config
from src.distributions import mixture, process
from src.errors import NumericFailure
from src.main import main
from src.models import ProcessSpec, SuiteName, VGParams
from src.reporting import verify


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# levy-mixtures ")
    rows = list(csv.reader(lines[1:]))
    return lines[0], rows[0], rows[1:]


def test_weights_command(tmp_path, capsys):
    """weights --n 5 writes every (n, k) row."""
    print("\n" + "=" * 60)
    print("TEST 1: weights and pdf commands")
    print("=" * 60)

    out = tmp_path / "w.csv"
    assert main(["weights", "--n", "5", "--out", str(out)]) == 0
    assert "Weights data saved to:" in capsys.readouterr().out

    meta, header, rows = _read_csv(out)
    assert "command=weights" in meta
    assert header == ["n", "k", "q_decimal", "q_rational"]
    fifth = [row for row in rows if row[0] == "5"]
    assert [int(row[1]) for row in fifth] == list(range(6))
    assert fifth[0][2:] == ["0", "0/1"]
    assert [row[2:] for row in rows if row[0] == "2"][1:] == [["0.25", "1/4"], ["0.75", "3/4"]]


def test_pdf_command(tmp_path):
    """T(3) transition pdf at t = 2 on a grid with negative bounds."""
    out = tmp_path / "p.csv"
    assert main(["pdf", "--law", "student3", "--t", "2", "--grid", "-10:10:401", "--out", str(out)]) == 0
    _, header, rows = _read_csv(out)
    assert header == ["x", "pdf"]
    assert len(rows) == 401
    at_zero = [float(p) for x, p in rows if float(x) == 0.0]
    assert at_zero == [pytest.approx(1.25 / math.pi, rel=1e-12)]


def test_config_file_and_overrides(tmp_path):
    """Flags override config file values."""
    print("\n" + "=" * 60)
    print("TEST 2: Config files")
    print("=" * 60)

    cfg = tmp_path / "run.env"
    cfg.write_text("law=vg\nlam=2\nt=1.5\ngrid=0.5:2:4\n")
    out = tmp_path / "vg.csv"
    assert main(["pdf", "--config", str(cfg), "--lam", "1", "--out", str(out)]) == 0

    _, _, rows = _read_csv(out)
    xs = [float(x) for x, _ in rows]
    assert xs == [0.5, 1.0, 1.5, 2.0]
    expected = process.process_pdf(ProcessSpec(law=VGParams(lam=1.0)), np.array(xs), 1.5)
    for (_, p), e in zip(rows, expected):
        assert float(p) == pytest.approx(e, rel=1e-15)

    bad = tmp_path / "bad.env"
    bad.write_text("law=vg\ncolour=blue\n")
    assert main(["pdf", "--config", str(bad)]) == 1


def test_exit_codes(tmp_path, capsys):
    """Invalid input exits with status 1."""
    print("\n" + "=" * 60)
    print("TEST 3: Exit codes")
    print("=" * 60)

    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["weights", "--n", "0"]) == 1
    assert main(["pdf", "--t", "-1"]) == 1
    assert main(["pdf", "--grid", "3:1:10"]) == 1
    assert main(["pdf", "--config", str(tmp_path / "missing.env")]) == 1
    assert main(["triplet", "--law", "vg", "--alpha", "2"]) == 1
    assert "Error:" in capsys.readouterr().err


def test_verify_command(capsys):
    """A fast suite passes and prints a result table."""
    print("\n" + "=" * 60)
    print("TEST 4: verify, simulate, figure")
    print("=" * 60)

    assert main(["verify", "--suite", "specfun"]) == 0
    printed = capsys.readouterr().out
    assert "PASS" in printed
    assert "0 failed" in printed


def test_triplet_command(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["triplet", "--law", "vg", "--lam", "1", "--grid", "-1:1:5", "--out", str(out)]) == 0
    assert "B = 0.0" in capsys.readouterr().err
    _, header, rows = _read_csv(out)
    assert header == ["z", "w"]
    assert [float(z) for z, _ in rows] == [-1.0, -0.5, 0.5, 1.0]
    assert float(rows[-1][1]) == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_simulate_command(tmp_path):
    """Escape statistics as JSON, paths as reproducible CSV."""
    stats_out = tmp_path / "escape.json"
    assert main(["simulate", "--noise", "student3_1", "--paths", "50", "--steps", "200", "--out", str(stats_out)]) == 0
    record = json.loads(stats_out.read_text())
    assert set(record) == {"noise", "k", "q", "n_paths", "steps", "escape_fraction", "mean_first_escape", "seed"}
    assert record["n_paths"] == 50
    assert 0.0 <= record["escape_fraction"] <= 1.0

    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--noise", "vg_1_sqrt2", "--steps", "300", "--seed", "5"]
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    _, header, rows = _read_csv(first)
    assert header == ["step", "y"]
    assert len(rows) == 301


def test_figure_command(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["figure", "--figure", "fig1", "--out", str(out)]) == 0
    meta, header, rows = _read_csv(out)
    assert "command=figure" in meta
    assert header == ["n", "k", "q_decimal", "q_rational"]
    assert rows[-1][:2] == ["10", "10"]


def test_numeric_and_verification_exit_codes(monkeypatch, capsys):
    """NumericFailure and overflow exit with 2, failed checks with 3."""

    def diverging(*args, **kwargs):
        raise NumericFailure("inversion did not settle", worst_estimate=1e-3)

    monkeypatch.setattr(process, "pdf_grid", diverging)
    assert main(["pdf", "--law", "student", "--nu", "5", "--t", "1"]) == 2
    assert "Numeric failure:" in capsys.readouterr().err

    def overflowing(n_max):
        raise OverflowError("math range error")

    monkeypatch.setattr(mixture, "weights_csv", overflowing)
    assert main(["weights", "--n", "3"]) == 2

    failing = [verify.CheckResult(SuiteName.SPECFUN, "forced", False, "forced failure", 0.0)]
    monkeypatch.setattr(verify.VerificationRunner, "run", lambda self, suite: failing)
    assert main(["verify", "--suite", "specfun"]) == 3
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "Verification failed:" in captured.err


def test_check_errors_become_failures():
    """A check that raises is recorded as a failed row, not propagated."""
    runner = verify.VerificationRunner(quick=True)
    for error in (ZeroDivisionError("division by zero"), ValueError("bad value")):

        def check(error=error):
            raise error

        result = runner._run_check(SuiteName.SPECFUN, "raises", check)
        assert not result.passed
        assert type(error).__name__ in result.detail


def test_rtol_is_scoped_to_one_run(tmp_path, monkeypatch):
    """rtol from a config file or flag applies to that run only."""
    original = config.numerics.inversion_rtol
    seen = []

    def recording(spec, xs, dt):
        seen.append(config.numerics.inversion_rtol)
        return process.GridFunction(np.asarray(xs, dtype=float), np.zeros(len(xs)))

    monkeypatch.setattr(process, "pdf_grid", recording)
    cfg = tmp_path / "run.env"
    cfg.write_text("law=student\nnu=5\nrtol=1e-6\ngrid=0:1:3\n")
    assert main(["pdf", "--config", str(cfg)]) == 0
    assert main(["pdf", "--config", str(cfg), "--rtol", "1e-8"]) == 0
    assert main(["pdf", "--law", "student", "--nu", "5", "--grid", "0:1:3"]) == 0
    assert seen == [1e-6, 1e-8, 1e-10]
    assert config.numerics.inversion_rtol == original


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
