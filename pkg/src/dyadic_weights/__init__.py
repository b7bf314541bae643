"""Dyadic Muckenhoupt weights: weight trees, class functionals, the lambda-operation,
periodic RH_p counterexamples and paraproduct resolvents."""

from .classes import (
    ClassReport,
    a1_functional,
    ainf_functional,
    ap_functional,
    buckley_functional,
    carleson_norm,
    class_report,
    doubling_constant,
    rhp_functional,
)
from .dyadic import (
    DyadicIndex,
    HaarSeries,
    WeightTree,
    children,
    evaluate,
    haar_coeffs_from_tree,
    haar_value,
    mean,
    mean_power,
    power_weight,
    tree_from_haar_coeffs,
)
from .errors import DivergentSeries, DyadicError, NotNested, OutOfRange, SizeLimit, SplitOutOfRange
from .paraexp import (
    convexity_lower_bound,
    lambda_op,
    lambda_op_product,
    ratio_comparison,
    symmetric_expansion_oracle,
)
from .paraproduct import (
    MeanZeroFunction,
    apply_resolvent,
    lp_norm,
    paraproduct_matrix,
    resolvent_norm_lower_bound,
    resolvent_sweep,
)
from .periodic import (
    CounterexampleCert,
    PeriodicSpec,
    build_counterexample,
    critical_p,
    line_geometry,
    minimal_period,
    periodic_weight,
    rhp_condition,
    rhp_constant_periodic,
    rhp_ratio_closed_form,
)
