"""Derived-flag geometry of control systems and their symmetry quotients."""

from .config import SamplingConfig, collect_warnings, current_config, use_config
from .expr import Expr, is_zero, parse, symbol
from .flags import (
    DerivedFlag,
    RefinedDerivedType,
    Signature,
    brunovsky_distribution,
    brunovsky_type,
    cauchy_bundle,
    deceleration,
    refined_derived_type,
    velocity,
)
from .geometry import Chart, Distribution, OneForm, VectorField, lie_bracket
from .goursat import (
    GoursatVerdict,
    SFLVerdict,
    bryant_sub_bundle,
    engel_rank,
    fundamental_bundle,
    goursat_verdict,
    polar_problem,
    resolvent,
    sfl_verdict,
)
from .sgs import PfaffianSystem, pfaffian_of, sgs_quotient_test, sgs_test
from .symmetry import (
    QuotientSpec,
    SymmetryAlgebra,
    augmented,
    bracket_table,
    is_control_admissible,
    is_control_symmetry,
    is_infinitesimal_symmetry,
    predict_augmented_rdt,
    quotient,
    relative_goursat_verdict,
    sfl_quotient_verdict,
    transversality,
)

__version__ = "0.1.0"

__all__ = [
    "SamplingConfig", "collect_warnings", "current_config", "use_config",
    "Expr", "is_zero", "parse", "symbol",
    "DerivedFlag", "RefinedDerivedType", "Signature", "brunovsky_distribution", "brunovsky_type",
    "cauchy_bundle", "deceleration", "refined_derived_type", "velocity",
    "Chart", "Distribution", "OneForm", "VectorField", "lie_bracket",
    "GoursatVerdict", "SFLVerdict", "bryant_sub_bundle", "engel_rank", "fundamental_bundle",
    "goursat_verdict", "polar_problem", "resolvent", "sfl_verdict",
    "PfaffianSystem", "pfaffian_of", "sgs_quotient_test", "sgs_test",
    "QuotientSpec", "SymmetryAlgebra", "augmented", "bracket_table", "is_control_admissible",
    "is_control_symmetry", "is_infinitesimal_symmetry", "predict_augmented_rdt", "quotient",
    "relative_goursat_verdict", "sfl_quotient_verdict", "transversality",
    "load_fixture",
]


def load_fixture(name: str):
    """Parse one of the bundled ``.sys`` files by stem name."""
    from importlib.resources import files

    from .cli.fileformat import loads

    text = files(__package__).joinpath("fixtures", f"{name}.sys").read_text()
    return loads(text, name=name, source=f"{name}.sys")
