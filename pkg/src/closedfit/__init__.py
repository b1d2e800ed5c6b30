"""Closed-form moment-type estimators for beta and weighted exponential-family
distributions, with a maximum-likelihood reference fitter, delta-method
asymptotics, QQ envelopes and a Monte Carlo benchmark harness."""

from .errors import (
    DataError,
    DegenerateSampleError,
    EstimationError,
    NonConvergenceError,
    NonFiniteStatisticsError,
    OutOfDomainError,
)
from .model import (
    BetaParams,
    FitResult,
    Sample,
    beta_logpdf,
    beta_loglik,
    beta_sample,
    information_criteria,
    positive_sample,
    replication_stream,
    unit_sample,
)
from .estimators import (
    Grid,
    RSPair,
    RSStatistics,
    default_grid,
    fit_chen_xiao,
    fit_ml,
    fit_profile,
    fit_rs,
    fit_tamae,
    rs_statistics,
)
from .asymptotics import (
    AsymptoticResult,
    MomentVector,
    Transform,
    builtin_transform_pair,
    delta_method,
    empirical_moments,
    ml_asymptotics,
    population_fixed_point,
    population_moments,
    theta_eval,
    xi_maps,
)
from .weighted import (
    Generator,
    WeightedParams,
    WeightedStatistics,
    builtin_generator,
    fit_weighted,
    fit_weighted_exp_variant,
    weighted_loglik,
    weighted_statistics,
)
from .montecarlo import (
    FrequencyTable,
    Metrics,
    MetricsRow,
    Scenario,
    compute_metrics,
    profile_frequencies,
    run_scenario,
)
from .envelope import EnvelopeResult, simulated_envelope
from .special import digamma, log_gamma, trigamma

__version__ = "0.1.0"
