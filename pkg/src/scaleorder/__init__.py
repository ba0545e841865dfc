"""Stochastic comparisons of parallel systems under the scale model.

Build a baseline (:class:`GeneralizedGamma` or one of its special cases),
wrap it in a :class:`ScaleModel` with per-component scales, and compare two
systems with :func:`check_st`, :func:`check_rh` and :func:`check_lr`.
:func:`applicable_theorems` reports which known ordering results apply to a
pair and validates each of them on the grid.
"""

__version__ = "0.1.0"

from .baseline import (
    Baseline,
    ConditionFunctions,
    GeneralizedGamma,
    condition_functions,
    make_special,
)
from .errors import DomainError, GridMismatchError, SpecError, TheoremContradiction
from .falsify import falsify
from .majorization import (
    MajorizationRelation,
    majorizes,
    relation,
    schur_convexity_probe,
    weakly_supermajorizes,
)
from .oracle import SampleBatch, ks_distance, mc_check_st, quantile, sample_max
from .orders import (
    ConditionReport,
    Grid,
    MonotoneVerdict,
    OrderVerdict,
    check_lr,
    check_monotone,
    check_rh,
    check_rh_ratio_increasing,
    check_st,
    lr_from_rh,
    verify_conditions,
)
from .scale_model import (
    OutlierModel,
    ScaleModel,
    TwoBaselineModel,
    max_cdf,
    max_pdf,
    max_reverse_hazard,
)
from .specs import parse_baseline, parse_grid, parse_outlier, parse_vector
from .theorems import Conclusion, applicable_theorems

__all__ = [
    "Baseline",
    "Conclusion",
    "ConditionFunctions",
    "ConditionReport",
    "DomainError",
    "GeneralizedGamma",
    "Grid",
    "GridMismatchError",
    "MajorizationRelation",
    "MonotoneVerdict",
    "OrderVerdict",
    "OutlierModel",
    "SampleBatch",
    "ScaleModel",
    "SpecError",
    "TheoremContradiction",
    "TwoBaselineModel",
    "applicable_theorems",
    "check_lr",
    "check_monotone",
    "check_rh",
    "check_rh_ratio_increasing",
    "check_st",
    "condition_functions",
    "falsify",
    "ks_distance",
    "lr_from_rh",
    "majorizes",
    "make_special",
    "max_cdf",
    "max_pdf",
    "max_reverse_hazard",
    "mc_check_st",
    "parse_baseline",
    "parse_grid",
    "parse_outlier",
    "parse_vector",
    "quantile",
    "relation",
    "sample_max",
    "schur_convexity_probe",
    "verify_conditions",
    "weakly_supermajorizes",
]
