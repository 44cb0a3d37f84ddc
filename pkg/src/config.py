"""Configuration for Levy Mixtures."""

from pydantic import BaseModel
from typing import Optional
from dotenv import load_dotenv
import os


class NumericsConfig(BaseModel):
    """Quadrature and truncation settings."""

    # Fourier inversion
    chf_floor: float = 1e-12  # default truncation M chosen so chf(M) < chf_floor
    max_truncation: float = 1024.0  # beyond this an oscillatory tail integral is added
    gl_nodes: int = 16  # Gauss-Legendre nodes per panel
    min_panels: int = 64
    max_panels: int = 65536
    inversion_rtol: float = 1e-10
    inversion_atol: float = 1e-12

    # QUADPACK settings
    quad_limit: int = 500
    quad_limlst: int = 200
    quad_epsabs: float = 1e-13
    quad_epsrel: float = 1e-11

    # Closed forms
    large_t_switch: float = 150.0  # student3 transition pdf switches to direct quadrature
    gamma_max_iter: int = 20000

    # Levy triplet extraction
    triplet_truncation: float = 400.0
    underflow_floor: float = 1e-290
    eps_sequence: tuple[float, float, float] = (0.1, 0.05, 0.025)


class SimulationConfig(BaseModel):
    """Monte Carlo defaults."""

    k: float = 0.1
    q: float = 8.0  # escape-ordering calibration
    steps: int = 5000
    n_paths: int = 10_000
    seed: int = 20240917
    batch_size: int = 1000


class OutputConfig(BaseModel):
    """Artifact output settings."""

    significant_digits: int = 17
    metadata_header: bool = True


class Config(BaseModel):
    """Main application configuration."""

    numerics: NumericsConfig = NumericsConfig()
    simulation: SimulationConfig = SimulationConfig()
    output: OutputConfig = OutputConfig()

    # Worker cap (set via LEVY_MIX_THREADS)
    threads: Optional[int] = None
    log_level: str = "WARNING"

    @classmethod
    def load(cls) -> "Config":
        """Load configuration with environment overrides."""
        load_dotenv()
        config = cls()
        threads = os.environ.get("LEVY_MIX_THREADS", "").strip()
        if threads.isdigit() and int(threads) > 0:
            config.threads = int(threads)
        config.log_level = os.environ.get("LEVY_MIX_LOG_LEVEL", config.log_level).upper()
        return config

    def worker_count(self) -> int:
        """Number of workers for grid and Monte Carlo partitioning."""
        if self.threads:
            return self.threads
        return min(8, os.cpu_count() or 1)


# Global config instance
config = Config.load()
