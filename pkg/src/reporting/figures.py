"""Data presets for the three figures: mixture weights, Levy densities, OU paths."""

import logging
from typing import Optional

import numpy as np

from ..distributions.mixture import weights_csv
from ..distributions.triplet import levy_density_table
from ..models import FigureName, Table
from ..simulation.ou import figure3_paths

logger = logging.getLogger(__name__)

WEIGHTS_MAX_TIME = 10
DENSITY_GRID = np.linspace(0.05, 10.0, 200)


def figure_table(name: FigureName, seed: Optional[int] = None) -> Table:
    name = FigureName(name)
    logger.info("building data for %s", name.value)
    if name == FigureName.FIG1:
        return weights_csv(WEIGHTS_MAX_TIME)
    if name == FigureName.FIG2:
        return levy_density_table(DENSITY_GRID)
    return figure3_paths(seed)
