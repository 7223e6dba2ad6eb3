"""Self-similar fractal curves and their dimensions.

Build polygonal iterates from a segment-replacement rule, expand them into
unbounded locally-rectifiable curves, and compare the Hausdorff dimension
(Moran root) against sausage-area based estimates.
"""

from .combin import (
    CensusTable,
    census_by_value,
    census_enumerate,
    half_sum_inequality,
    majority_short_count,
    multinomial_census,
)
from .curvegen import (
    LengthStats,
    Polyline,
    archimedean_spiral,
    contract_iterate,
    expand_iterate,
    length_stats,
    log_spiral_arc_length,
    logarithmic_spiral,
    polyline_from_text,
    polyline_to_text,
)
from .dims import (
    DimensionEstimate,
    DimensionSample,
    TheoremReport,
    hausdorff_dimension,
    is_resolvable,
    mf_dimension_estimate,
    mf_dimension_estimate_spiral,
    mf_dimension_resolvable,
    minkowski_dimension_estimate,
    moran_gap,
    theorem2_lower_bound,
    verify_theorem1,
    verify_theorem2,
)
from .errors import BudgetError, RuleError
from .geom import (
    HullSummary,
    SausageEstimate,
    capsule_area,
    convex_hull,
    sausage_area,
    self_intersects,
)
from .model import (
    GeneratorRule,
    ValidationReport,
    distinct_ratios,
    parse_rule,
    ratio_value_index,
    serialize_rule,
    validate_rule,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CensusTable",
    "DimensionEstimate",
    "DimensionSample",
    "GeneratorRule",
    "HullSummary",
    "LengthStats",
    "Polyline",
    "RuleError",
    "SausageEstimate",
    "TheoremReport",
    "ValidationReport",
    "archimedean_spiral",
    "capsule_area",
    "census_by_value",
    "census_enumerate",
    "contract_iterate",
    "convex_hull",
    "distinct_ratios",
    "expand_iterate",
    "half_sum_inequality",
    "hausdorff_dimension",
    "is_resolvable",
    "length_stats",
    "log_spiral_arc_length",
    "logarithmic_spiral",
    "majority_short_count",
    "mf_dimension_estimate",
    "mf_dimension_estimate_spiral",
    "mf_dimension_resolvable",
    "minkowski_dimension_estimate",
    "moran_gap",
    "multinomial_census",
    "parse_rule",
    "polyline_from_text",
    "polyline_to_text",
    "ratio_value_index",
    "sausage_area",
    "self_intersects",
    "serialize_rule",
    "validate_rule",
    "verify_theorem1",
    "verify_theorem2",
]
