"""Exact cyclic homology computations for finite-dimensional algebras."""

from .rings import ZZ, QQ, GF, BaseRing, ring_from_name
from .matrix import ExactMatrix
from .complexes import ChainComplex, ChainMap, HomologyGroup, complex_homology, homology_map
from .snf import det_bareiss, diagonal_of, invariant_factors, smith_normal_form
from .algebra import (
    CATALOG_NAMES,
    Algebra,
    AlgebraError,
    algebra_from_json,
    algebra_to_json,
    catalog,
)
from .cyclic import (
    CyclicModule,
    MixedComplex,
    NormalizedBarModule,
    bar_complex,
    bar_module,
    cyclic_bar_module,
    cyclic_identity_multibase_report,
    cyclic_identity_report,
    hochschild_complex,
    mixed_complex_from_display,
    normalized,
)
from .bicomplex import (
    HomologyTable,
    PeriodicBicomplexWindow,
    StabilizationReport,
    WindowError,
    build_window,
    conjugate_dimension_check,
    default_q_schedule,
    hc,
    hc_minus_poly,
    hp_poly,
    hp_s_tower_table,
    hp_via_S_tower,
    truncation_inclusion,
)
from .tate import (
    CheckReport,
    CompleteResolution,
    GModuleComplex,
    TateComplex,
    TateError,
    complete_resolution_cyclic,
    construction_5_1_check,
    corollary_5_3_check,
    direct_sum_modules,
    named_module,
    norm_oracle,
    tate_complex,
)
from .verify import CRITERIA, CRITERION_NAMES, CriterionResult, SuiteContext, run_suite

__version__ = "0.1.0"

__all__ = [
    "ZZ",
    "QQ",
    "GF",
    "BaseRing",
    "ring_from_name",
    "ExactMatrix",
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "complex_homology",
    "homology_map",
    "smith_normal_form",
    "invariant_factors",
    "diagonal_of",
    "det_bareiss",
    "Algebra",
    "AlgebraError",
    "CATALOG_NAMES",
    "catalog",
    "algebra_from_json",
    "algebra_to_json",
    "CyclicModule",
    "NormalizedBarModule",
    "MixedComplex",
    "mixed_complex_from_display",
    "cyclic_bar_module",
    "bar_module",
    "normalized",
    "hochschild_complex",
    "bar_complex",
    "cyclic_identity_report",
    "cyclic_identity_multibase_report",
    "PeriodicBicomplexWindow",
    "WindowError",
    "build_window",
    "truncation_inclusion",
    "HomologyTable",
    "StabilizationReport",
    "default_q_schedule",
    "hc",
    "hp_poly",
    "hc_minus_poly",
    "hp_via_S_tower",
    "hp_s_tower_table",
    "conjugate_dimension_check",
    "TateError",
    "CompleteResolution",
    "complete_resolution_cyclic",
    "GModuleComplex",
    "named_module",
    "direct_sum_modules",
    "TateComplex",
    "tate_complex",
    "norm_oracle",
    "CheckReport",
    "construction_5_1_check",
    "corollary_5_3_check",
    "CRITERIA",
    "CRITERION_NAMES",
    "CriterionResult",
    "SuiteContext",
    "run_suite",
    "__version__",
]
