"""Laws, process transition densities, mixture weights and Levy triplets."""

from .laws import (
    law_chf,
    law_chf_derivative,
    law_pdf,
    law_variance,
    student_chf,
    student_chf_odd,
    student_moment,
    student_pdf,
    student_variance,
    vg_chf,
    vg_moment,
    vg_pdf,
    vg_variance,
)
from .mixture import MixtureWeights, mixture_pdf, mixture_weights, weights_csv
from .process import (
    GridFunction,
    gaussian_limit_distance,
    invert_chf,
    pdf_grid,
    process_pdf,
    student3_tail_coefficient,
    student3_transition_pdf,
    transition_chf,
    vg_small_x_regime,
    vg_transition_pdf,
)
from .triplet import (
    LevyTriplet,
    closed_form_triplet,
    levy_density_table,
    levy_khinchin_residual,
    numeric_a,
    numeric_b,
    numeric_triplet,
    numeric_w,
    reference_triplet,
    w_student3,
    w_vg,
)

__all__ = [
    "law_chf",
    "law_chf_derivative",
    "law_pdf",
    "law_variance",
    "student_chf",
    "student_chf_odd",
    "student_moment",
    "student_pdf",
    "student_variance",
    "vg_chf",
    "vg_moment",
    "vg_pdf",
    "vg_variance",
    "MixtureWeights",
    "mixture_pdf",
    "mixture_weights",
    "weights_csv",
    "GridFunction",
    "gaussian_limit_distance",
    "invert_chf",
    "pdf_grid",
    "process_pdf",
    "student3_tail_coefficient",
    "student3_transition_pdf",
    "transition_chf",
    "vg_small_x_regime",
    "vg_transition_pdf",
    "LevyTriplet",
    "closed_form_triplet",
    "levy_density_table",
    "levy_khinchin_residual",
    "numeric_a",
    "numeric_b",
    "numeric_triplet",
    "numeric_w",
    "reference_triplet",
    "w_student3",
    "w_vg",
]
