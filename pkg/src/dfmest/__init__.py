"""Distribution-free tools for univariate convex M-estimation.

The package is organized around one-dimensional convex objectives with
extended-real values: exact piecewise-linear calculus plus bisection
fallbacks (:mod:`~dfmest.convex`), loss families with certified
subgradient envelopes (:mod:`~dfmest.families`), achievability and
certification conditions (:mod:`~dfmest.achievability`), separation
thresholds and certified hard instances (:mod:`~dfmest.separation`),
restricted estimators (:mod:`~dfmest.estimators`), stationarity
diagnostics (:mod:`~dfmest.stationarity`), and a Monte Carlo harness with
a CLI front end (:mod:`~dfmest.harness`, :mod:`~dfmest.cli`).
"""

from .achievability import (
    ConditionReport,
    achievable_interval,
    check_condition_c1,
    check_condition_c2,
    compact_lipschitz,
    project_achievable,
    signed_lipschitz,
)
from .convex import (
    ConvexFn,
    PiecewiseLinearConvex,
    argmin_interval,
    minimize,
    mix,
    pinball,
    sublevel_interval,
)
from .errors import (
    CapacityError,
    CertificationError,
    ConfigurationError,
    ConstructionError,
    DomainError,
    IndeterminateFormError,
    ParameterError,
)
from .estimators import (
    Estimator,
    StarRestriction,
    delta_schedule,
    empirical_quantile,
    erm,
    estimator_from_descriptor,
    restricted_erm,
    restricted_sgd,
    star_restrict,
)
from .extreal import INF, NEG_INF, ExtReal, Interval, ext, interval
from .families import (
    LossFamily,
    RateFunction,
    SampleSpace,
    bernoulli_log_family,
    exponential_family,
    family_from_descriptor,
    identity_rate,
    norate_family,
    piecewise_family,
    power_rate,
    quantile_family,
    rate_from_inverse,
    squared_family,
)
from .harness import (
    ExperimentConfig,
    RiskEstimate,
    excess_risk,
    hard_instance_report,
    risk_curve,
    seeded_stream,
    write_rows,
)
from .separation import (
    DiscreteDist,
    HardInstance,
    blowup_pair,
    dopt,
    hard_instance_from_dict,
    hellinger2,
    minimax_testing_lb,
    norate_pair,
    population_loss,
    quantile_pair,
    tv,
    tv_product_bound,
    tv_product_exact,
)
from .stationarity import (
    StationarityResult,
    UniformSampler,
    concentration_experiment,
    g_min_oracle,
    quantile_coverage,
    stationarity_error,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionReport",
    "achievable_interval",
    "check_condition_c1",
    "check_condition_c2",
    "compact_lipschitz",
    "project_achievable",
    "signed_lipschitz",
    "ConvexFn",
    "PiecewiseLinearConvex",
    "argmin_interval",
    "minimize",
    "mix",
    "pinball",
    "sublevel_interval",
    "CapacityError",
    "CertificationError",
    "ConfigurationError",
    "ConstructionError",
    "DomainError",
    "IndeterminateFormError",
    "ParameterError",
    "Estimator",
    "StarRestriction",
    "delta_schedule",
    "empirical_quantile",
    "erm",
    "estimator_from_descriptor",
    "restricted_erm",
    "restricted_sgd",
    "star_restrict",
    "INF",
    "NEG_INF",
    "ExtReal",
    "Interval",
    "ext",
    "interval",
    "LossFamily",
    "RateFunction",
    "SampleSpace",
    "bernoulli_log_family",
    "exponential_family",
    "family_from_descriptor",
    "identity_rate",
    "norate_family",
    "piecewise_family",
    "power_rate",
    "quantile_family",
    "rate_from_inverse",
    "squared_family",
    "ExperimentConfig",
    "RiskEstimate",
    "excess_risk",
    "hard_instance_report",
    "risk_curve",
    "seeded_stream",
    "write_rows",
    "DiscreteDist",
    "HardInstance",
    "blowup_pair",
    "dopt",
    "hard_instance_from_dict",
    "hellinger2",
    "minimax_testing_lb",
    "norate_pair",
    "population_loss",
    "quantile_pair",
    "tv",
    "tv_product_bound",
    "tv_product_exact",
    "StationarityResult",
    "UniformSampler",
    "concentration_experiment",
    "g_min_oracle",
    "quantile_coverage",
    "stationarity_error",
    "__version__",
]
