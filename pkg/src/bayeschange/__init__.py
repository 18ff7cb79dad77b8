"""Online Bayesian estimation in abruptly changing environments.

The package provides exponential-family conjugate models (Gaussian with
known variance, categorical-Dirichlet), surprise measures with a
surprise-modulated adaptation rate, a sampler for the piecewise-stationary
generative model, eight online estimators behind a uniform step/estimate
contract, MSE-based evaluation with grid tuning and a robustness protocol,
and the two binned surprise-dissociation experiments.
"""

from .expfam import (
    CATEGORICAL,
    GAUSSIAN,
    Belief,
    ConjugateModel,
    bayes_update,
    categorical_model,
    dirichlet_alpha,
    dirichlet_belief,
    gaussian_belief,
    gaussian_mean_var,
    gaussian_model,
    geometric_mix,
    kl,
    log_norm,
    log_predictive,
    log_surprise_bf,
    param_log_pdf,
    point_estimate,
    predictive,
    prior_belief,
    sample_obs,
    sample_param,
    sufficient_stat,
    surprise_bf,
)
from .surprise import (
    SurpriseRecord,
    adaptation_rate,
    confidence_corrected,
    gamma_from_shannon,
    make_record,
    scaled_likelihood_belief,
    shannon_surprise,
)
from .environment import (
    EnvConfig,
    EnvTrace,
    categorical_task,
    derive_seed,
    gaussian_task,
    rng_for,
    simulate,
    write_trace_csv,
)
from .estimators import (
    ExactBayes,
    LeakyIntegrator,
    MessagePassing,
    NasStar,
    NumericError,
    OnlineEstimator,
    ParticleFilter,
    SMiLe,
    VarSMiLe,
    make_estimator,
    parse_algorithm,
)
from .evaluation import (
    RunResult,
    delta_mse,
    grid_search,
    mean_regret,
    mse,
    run_estimator,
    transient_mse,
    transient_mse_curve,
    write_run_csv,
)
from .predictions import PredictionConfig, run_prediction1, run_prediction2

__version__ = "0.1.0"
