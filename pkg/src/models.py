"""Data models for Levy Mixtures."""

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Annotated, Any, Optional, Literal, Union
from pathlib import Path
from enum import Enum

import numpy as np

from .config import config


# ---------------------------------------------------------------------------
# Law parameters (reduced units: alpha = 1, delta = 1 unless stated)
# ---------------------------------------------------------------------------


class VGParams(BaseModel):
    """Centered symmetric Variance Gamma law VG(lam, alpha)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["vg"] = "vg"
    lam: float = Field(gt=0, allow_inf_nan=False)  # type index
    alpha: float = Field(1.0, gt=0, allow_inf_nan=False)  # inverse spatial scale


class StudentParams(BaseModel):
    """Centered symmetric Student law T(nu, delta)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["student"] = "student"
    nu: float = Field(gt=0, allow_inf_nan=False)  # tail index
    delta: float = Field(1.0, gt=0, allow_inf_nan=False)  # scale


class GHParams(BaseModel):
    """Centered symmetric Generalized Hyperbolic law GH(lam, alpha, delta)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["gh"] = "gh"
    lam: float = Field(allow_inf_nan=False)
    alpha: float = Field(gt=0, allow_inf_nan=False)
    delta: float = Field(gt=0, allow_inf_nan=False)


class NormalParams(BaseModel):
    """Centered normal law N(0, sigma)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["normal"] = "normal"
    sigma: float = Field(1.0, gt=0, allow_inf_nan=False)


class CauchyParams(BaseModel):
    """Centered Cauchy law C(delta)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["cauchy"] = "cauchy"
    delta: float = Field(1.0, gt=0, allow_inf_nan=False)


LawParams = Annotated[
    Union[VGParams, StudentParams, GHParams, NormalParams, CauchyParams],
    Field(discriminator="kind"),
]


class ProcessSpec(BaseModel):
    """A Levy process generated by `law` at time `time_scale` (T)."""

    model_config = ConfigDict(frozen=True)

    law: LawParams
    time_scale: float = Field(1.0, gt=0, allow_inf_nan=False)


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------


class SmallXRegime(str, Enum):
    """Behaviour of the VG transition pdf near the origin."""
    SINGULAR = "singular"
    LOG_SINGULAR = "log_singular"
    FINITE = "finite"


class TripletKind(str, Enum):
    """How a Levy triplet was obtained."""
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


class ReferenceProcess(str, Enum):
    """Stable processes with textbook triplets."""
    WIENER = "wiener"
    CAUCHY = "cauchy"


class NoiseKind(str, Enum):
    """Unit-variance increment laws driving the OU engine."""
    NORMAL01 = "normal01"
    VG_1_SQRT2 = "vg_1_sqrt2"
    STUDENT3_1 = "student3_1"


class CommandName(str, Enum):
    """CLI commands."""
    PDF = "pdf"
    CHF = "chf"
    WEIGHTS = "weights"
    TRIPLET = "triplet"
    VERIFY = "verify"
    SIMULATE = "simulate"
    FIGURE = "figure"


class LawName(str, Enum):
    """Law selectors accepted on the command line."""
    VG = "vg"
    STUDENT = "student"
    STUDENT3 = "student3"
    NORMAL = "normal"
    CAUCHY = "cauchy"
    GH = "gh"
    WIENER = "wiener"


class SuiteName(str, Enum):
    """Verification suites."""
    SPECFUN = "specfun"
    LAWS = "laws"
    PROCESS = "process"
    MIXTURE = "mixture"
    TRIPLET = "triplet"
    SIMULATE = "simulate"
    ALL = "all"


class FigureName(str, Enum):
    """Figure data presets."""
    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"


# ---------------------------------------------------------------------------
# Simulation records
# ---------------------------------------------------------------------------


class ForceSpec(BaseModel):
    """Restoring force -k*y, optionally acting only for |y| <= q."""

    model_config = ConfigDict(frozen=True)

    k: float = Field(0.0, ge=0, allow_inf_nan=False)
    q: Optional[float] = Field(None, gt=0)

    def drift(self, y):
        """Force value at position(s) y."""
        y = np.asarray(y, dtype=float)
        force = -self.k * y
        if self.q is None:
            return force
        return np.where(np.abs(y) <= self.q, force, 0.0)


class EscapeStats(BaseModel):
    """Escape statistics of cutoff-force OU paths."""

    noise: NoiseKind
    k: float
    q: float
    n_paths: int
    steps: int
    escape_fraction: float
    mean_first_escape: Optional[float] = None  # None when no path escaped
    seed: int


# ---------------------------------------------------------------------------
# Tabular output
# ---------------------------------------------------------------------------


class Table(BaseModel):
    """Header plus rows, ready for CSV emission."""

    header: list[str]
    rows: list[tuple[Any, ...]] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# CLI configuration
# ---------------------------------------------------------------------------


class GridSpec(BaseModel):
    """Uniform grid lo:hi:count."""

    model_config = ConfigDict(frozen=True)

    lo: float = Field(allow_inf_nan=False)
    hi: float = Field(allow_inf_nan=False)
    count: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_order(self) -> "GridSpec":
        if not self.lo < self.hi:
            raise ValueError(f"grid min {self.lo} must be below max {self.hi}")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse 'lo:hi:count'."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like lo:hi:count, got {text!r}")
        return cls(lo=float(parts[0]), hi=float(parts[1]), count=int(parts[2]))

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


class RunConfig(BaseModel):
    """Everything a single CLI invocation needs."""

    command: CommandName
    law: LawName = LawName.STUDENT3
    lam: float = Field(1.0, gt=0)
    alpha: float = Field(1.0, gt=0)
    nu: float = Field(3.0, gt=0)
    delta: float = Field(1.0, gt=0)
    sigma: float = Field(1.0, gt=0)
    grid: GridSpec = GridSpec(lo=-10.0, hi=10.0, count=401)
    t: float = Field(1.0, gt=0, allow_inf_nan=False)
    n: int = Field(5, ge=1, le=10_000)
    out: Optional[Path] = None
    seed: int = Field(default_factory=lambda: config.simulation.seed, ge=0, lt=2**64)

    # simulate
    noise: NoiseKind = NoiseKind.STUDENT3_1
    k: float = Field(0.1, ge=0)
    q: Optional[float] = Field(None, gt=0)
    steps: int = Field(5000, ge=1)
    paths: Optional[int] = Field(None, ge=1)
    y0: float = 0.0

    # verify / figure / triplet
    suite: SuiteName = SuiteName.ALL
    quick: bool = False
    figure: FigureName = FigureName.FIG1
    numeric: bool = False

    # Tolerance overrides
    truncation_m: Optional[float] = Field(None, gt=0)
    rtol: float = Field(1e-10, gt=0)

    @field_validator("grid", mode="before")
    @classmethod
    def _parse_grid(cls, value):
        if isinstance(value, str):
            return GridSpec.parse(value)
        return value

    def law_params(self):
        """Build the generating law selected by `law`."""
        if self.law == LawName.VG:
            return VGParams(lam=self.lam, alpha=self.alpha)
        if self.law == LawName.STUDENT:
            return StudentParams(nu=self.nu, delta=self.delta)
        if self.law == LawName.STUDENT3:
            return StudentParams(nu=3.0, delta=self.delta)
        if self.law in (LawName.NORMAL, LawName.WIENER):
            return NormalParams(sigma=self.sigma)
        if self.law == LawName.CAUCHY:
            return CauchyParams(delta=self.delta)
        return GHParams(lam=self.lam, alpha=self.alpha, delta=self.delta)
