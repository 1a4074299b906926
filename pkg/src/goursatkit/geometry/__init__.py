"""Charts, fields, forms and generic-point linear algebra."""

from .chart import ROLES, Chart, Coordinate
from .distribution import (
    Distribution,
    annihilator,
    combine,
    frobenius_integrable,
    intersect,
    kernel_of_forms,
    member,
    pairing_matrix,
    sum_distributions,
)
from .fields import ChartMismatch, OneForm, VectorField, lie_bracket
from .forms import AltForm, exterior_derivative, merge_sign, numeric_wedge, wedge
from .linalg import LinalgError, SymMatrix, exact_rank, generic_rank, nullspace, numeric_rank, select_independent

__all__ = [
    "ROLES", "Chart", "Coordinate", "Distribution", "annihilator", "combine",
    "frobenius_integrable", "intersect", "kernel_of_forms", "member", "pairing_matrix",
    "sum_distributions", "ChartMismatch", "OneForm", "VectorField", "lie_bracket",
    "AltForm", "exterior_derivative", "merge_sign", "numeric_wedge", "wedge",
    "LinalgError", "SymMatrix", "exact_rank", "generic_rank", "nullspace", "numeric_rank",
    "select_independent",
]
