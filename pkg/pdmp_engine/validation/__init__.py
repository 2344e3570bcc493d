"""
Estimators, closed-form limit laws and experiment summaries.
"""

from .summary import (
    MonteCarloEstimate,
    EstimatorSummary,
    ExperimentSummary,
    estimate_from_samples,
    config_digest,
)
from .estimators import (
    EmpiricalLaw,
    prejump_speed_law,
    prejump_speed_tv,
    tv_distance,
    tv_standard_error,
    pre_boundary_window,
    drift_estimate,
    ks_statistic,
    ks_threshold,
    occupation_vs_pi,
    martingale_residual,
)
from .limit_law import (
    LimitLawQuery,
    limit_law_probability,
    limit_law_partition_total,
    limit_law_estimate,
    query_event,
)

__all__ = [
    "MonteCarloEstimate",
    "EstimatorSummary",
    "ExperimentSummary",
    "estimate_from_samples",
    "config_digest",
    "EmpiricalLaw",
    "prejump_speed_law",
    "prejump_speed_tv",
    "tv_distance",
    "tv_standard_error",
    "pre_boundary_window",
    "drift_estimate",
    "ks_statistic",
    "ks_threshold",
    "occupation_vs_pi",
    "martingale_residual",
    "LimitLawQuery",
    "limit_law_probability",
    "limit_law_partition_total",
    "limit_law_estimate",
    "query_event",
]
