"""Surprise measures and the surprise-modulated adaptation rate.

Three measures are computed here:

* ``s_bf``: the Bayes-factor surprise, the ratio of the predictive
  probability of an observation under the prior belief to that under the
  current belief.  It tests "the environment changed" against "it did not".
* Shannon surprise: negative log predictive probability under the
  change-aware marginal ``(1 - p_c) P(y; current) + p_c P(y; prior)``.
* ``s_cc``: confidence-corrected surprise, the KL divergence from the
  current belief to the scaled likelihood of the observation.

The adaptation rate ``gamma(S, m) = m S / (1 + m S)`` converts a surprise
value into a mixing weight in [0, 1] between integrating an observation and
resetting to the prior.  Two algebraically equivalent routes compute it: from
``s_bf`` directly, or as ``p_c * exp(delta Shannon surprise)``; every
estimator's step record satisfies both within floating-point error.

All surprise bookkeeping is done in log space and stored in nats; linear
probabilities appear only at API boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .expfam import GAUSSIAN, Belief, ConjugateModel, kl, sufficient_stat

__all__ = [
    "SurpriseRecord",
    "adaptation_rate",
    "shannon_surprise",
    "gamma_from_shannon",
    "confidence_corrected",
    "scaled_likelihood_belief",
    "make_record",
]


@dataclass(frozen=True)
class SurpriseRecord:
    """Per-step surprise summary shared by all estimators.

    ``gamma`` always equals ``adaptation_rate(s_bf, m)`` for the modulation
    parameter in force; ``s_cc`` is populated only by estimators whose update
    is driven by confidence-corrected surprise.
    """

    s_bf: float
    s_sh_current: float
    s_sh_prior: float
    gamma: float
    s_cc: float | None = None


def adaptation_rate(s: float, m: float) -> float:
    """gamma(S, m) = m S / (1 + m S), saturating at 1 for infinite surprise."""
    if s < 0 or m < 0:
        raise ValueError(f"surprise and modulation must be >= 0, got s={s}, m={m}")
    ms = m * s
    if math.isinf(ms):
        return 1.0
    if math.isnan(ms):  # 0 * inf: zero modulation wins
        return 0.0
    return ms / (1.0 + ms)


def shannon_surprise(p_current: float, p_prior: float, p_c: float) -> float:
    """-log of the change-aware marginal (1 - p_c) p_current + p_c p_prior."""
    if p_current < 0 or p_prior < 0:
        raise ValueError("probabilities must be >= 0")
    if not 0.0 < p_c < 1.0:
        raise ValueError(f"p_c must be in (0, 1), got {p_c}")
    mix = (1.0 - p_c) * p_current + p_c * p_prior
    if mix == 0.0:
        return math.inf
    return -math.log(mix)


def gamma_from_shannon(s_sh_current: float, s_sh_prior: float, p_c: float) -> float:
    """Adaptation rate recovered from the difference in Shannon surprise.

    ``gamma = p_c * exp(s_sh_current - s_sh_prior)`` matches
    ``adaptation_rate(s_bf, p_c / (1 - p_c))`` whenever the two surprises
    come from consistent predictive probabilities.
    """
    return p_c * math.exp(s_sh_current - s_sh_prior)


def scaled_likelihood_belief(model: ConjugateModel, y) -> Belief:
    """Conjugate-family form of the likelihood of y normalized over theta.

    Gaussian: ``N(theta; y, sigma^2)``.  Categorical: the unique distribution
    on the simplex proportional to ``p_y``, which is Dirichlet with the
    observed category's concentration raised to 2 and all others 1.
    """
    if model.kind == GAUSSIAN:
        s2 = model.sigma**2
        return Belief(np.array([float(y) / s2]), 1.0)
    return Belief(np.ones(model.num_categories) + sufficient_stat(model, y), 1.0)


def confidence_corrected(model: ConjugateModel, belief: Belief, y) -> float:
    """KL divergence from the current belief to the scaled likelihood of y."""
    return kl(model, belief, scaled_likelihood_belief(model, y))


def make_record(log_p_current: float, log_p_prior: float, m: float,
                s_cc: float | None = None) -> SurpriseRecord:
    """Assemble a SurpriseRecord from log predictive probabilities.

    ``log_p_current`` is the log predictive of the observation under the
    estimator's current (possibly mixture) belief, ``log_p_prior`` under the
    prior.  ``m`` is the modulation parameter in force; the implied change
    probability ``p_c = m / (1 + m)`` weights the Shannon marginal.
    """
    log_sbf = log_p_prior - log_p_current
    s_bf = math.exp(log_sbf) if log_sbf < 709.0 else math.inf
    if m > 0.0:
        gamma = float(expit(math.log(m) + log_sbf))
        p_c = m / (1.0 + m)
        s_sh_current = -float(np.logaddexp(math.log1p(-p_c) + log_p_current,
                                           math.log(p_c) + log_p_prior))
    else:
        gamma = 0.0
        s_sh_current = -log_p_current
    return SurpriseRecord(
        s_bf=s_bf,
        s_sh_current=s_sh_current,
        s_sh_prior=-log_p_prior,
        gamma=gamma,
        s_cc=s_cc,
    )
