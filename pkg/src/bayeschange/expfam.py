"""Exponential-family conjugate models and the belief algebra shared by all estimators.

Two observation models are supported:

* ``gaussian``: scalar observations ``y ~ N(theta, sigma^2)`` with known
  ``sigma`` and unknown mean ``theta``.  The conjugate family over ``theta``
  is Gaussian.
* ``categorical``: observations ``y in {1, ..., K}`` drawn from a categorical
  distribution with unknown probability vector ``theta`` on the simplex.  The
  conjugate family is Dirichlet.

Beliefs over ``theta`` are stored in natural coordinates ``(chi, nu)``.  The
conjugate density is proportional to ``exp(theta . chi - nu * A(theta))``
where ``A`` is the likelihood log-partition function, and ``f(chi, nu)``
denotes the normalization factor that multiplies this exponential.  Observing
``y`` maps ``(chi, nu) -> (chi + phi(y), nu + 1)`` with ``phi`` the
sufficient statistic.

Coordinate conventions (the base measure of the conjugate family is folded
into the family-specific normalizer):

* Gaussian: ``phi(y) = y / sigma^2``, ``A(theta) = theta^2 / (2 sigma^2)``.
  A belief ``N(mean, var)`` has ``chi = mean / var`` and ``nu = sigma^2 / var``,
  so ``nu`` is real valued and need not be an integer.
* Categorical: ``chi`` holds the Dirichlet concentrations directly (the
  ``-1`` offset of the classic ``prod p_k^(a_k - 1)`` density is absorbed
  into the stored coordinates), and ``phi(y)`` is the one-hot indicator of
  the observed category.  ``nu`` is carried along (it mixes and updates like
  a pseudo-count) but does not enter the Dirichlet density.

Categories are 1-based everywhere in the public API: ``y in {1, ..., K}``.

All operations are pure; :class:`ConjugateModel` and :class:`Belief` values
are immutable and safe to share across threads.  Random sources are always
passed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaln

GAUSSIAN = "gaussian"
CATEGORICAL = "categorical"

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ConjugateModel:
    """A likelihood family plus the prior belief in natural coordinates.

    Parameters
    ----------
    kind : str
        ``"gaussian"`` or ``"categorical"``.
    sigma : float
        Observation standard deviation (Gaussian only).
    num_categories : int
        Number of categories K (categorical only).
    prior_chi : np.ndarray
        Natural-parameter vector of the prior, shape ``(1,)`` for Gaussian
        and ``(K,)`` for categorical.
    prior_nu : float
        Prior pseudo-count.  Must be positive for a proper Gaussian prior.
    """

    kind: str
    sigma: float
    num_categories: int
    prior_chi: np.ndarray
    prior_nu: float

    def __post_init__(self):
        object.__setattr__(self, "prior_chi", np.asarray(self.prior_chi, dtype=float))
        if self.kind == GAUSSIAN:
            if self.sigma <= 0:
                raise ValueError(f"sigma must be > 0, got {self.sigma}")
            if self.prior_nu <= 0:
                raise ValueError("Gaussian prior requires prior_nu > 0 (finite prior variance)")
        elif self.kind == CATEGORICAL:
            if self.num_categories < 2:
                raise ValueError(f"num_categories must be >= 2, got {self.num_categories}")
            if self.prior_chi.shape != (self.num_categories,):
                raise ValueError("prior_chi must have one concentration per category")
            if np.any(self.prior_chi <= 0):
                raise ValueError("Dirichlet concentrations must be > 0")
            if self.prior_nu < 0:
                raise ValueError("prior_nu must be >= 0")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @property
    def dim(self) -> int:
        """Dimension of the sufficient statistic."""
        return 1 if self.kind == GAUSSIAN else self.num_categories


@dataclass(frozen=True)
class Belief:
    """Natural-parameter coordinates ``(chi, nu)`` of a conjugate distribution."""

    chi: np.ndarray
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "chi", np.asarray(self.chi, dtype=float))
        object.__setattr__(self, "nu", float(self.nu))


def gaussian_model(sigma: float, mu0: float = 0.0, sigma0: float = 1.0) -> ConjugateModel:
    """Gaussian likelihood N(theta, sigma^2) with prior theta ~ N(mu0, sigma0^2)."""
    if sigma0 <= 0:
        raise ValueError("sigma0 must be > 0")
    nu0 = sigma**2 / sigma0**2
    chi0 = mu0 / sigma0**2
    return ConjugateModel(GAUSSIAN, float(sigma), 0, np.array([chi0]), nu0)


def categorical_model(num_categories: int = 5, s: float = 1.0) -> ConjugateModel:
    """Categorical likelihood over K states with prior theta ~ Dirichlet(s * 1)."""
    if s <= 0:
        raise ValueError("s must be > 0")
    return ConjugateModel(CATEGORICAL, 0.0, int(num_categories),
                          np.full(num_categories, float(s)), 0.0)


def prior_belief(model: ConjugateModel) -> Belief:
    """The model's prior as a Belief."""
    return Belief(model.prior_chi, model.prior_nu)


def gaussian_belief(model: ConjugateModel, mean: float, var: float) -> Belief:
    """Build a Gaussian belief N(mean, var) in natural coordinates."""
    _require(model, GAUSSIAN)
    if var <= 0:
        raise ValueError("var must be > 0")
    return Belief(np.array([mean / var]), model.sigma**2 / var)


def dirichlet_belief(alpha, nu: float = 0.0) -> Belief:
    """Build a Dirichlet belief from a concentration vector."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ValueError("Dirichlet concentrations must be > 0")
    return Belief(alpha, nu)


def gaussian_mean_var(model: ConjugateModel, belief: Belief) -> tuple[float, float]:
    """Mean and variance of a Gaussian belief."""
    _require(model, GAUSSIAN)
    s2 = model.sigma**2
    var = s2 / belief.nu
    return float(belief.chi[0]) * var, var


def dirichlet_alpha(belief: Belief) -> np.ndarray:
    """Concentration vector of a categorical-family belief."""
    return belief.chi


def _require(model: ConjugateModel, kind: str) -> None:
    if model.kind != kind:
        raise ValueError(f"operation requires a {kind} model, got {model.kind}")


# ---------------------------------------------------------------------------
# Sufficient statistics and base measures
# ---------------------------------------------------------------------------

def sufficient_stat(model: ConjugateModel, y) -> np.ndarray:
    """phi(y): the sufficient statistic added to chi on a conjugate update."""
    if model.kind == GAUSSIAN:
        return np.array([float(y) / model.sigma**2])
    k = _category_index(model, y)
    phi = np.zeros(model.num_categories)
    phi[k] = 1.0
    return phi


def log_h(model: ConjugateModel, y) -> float:
    """Log base measure of the likelihood at y."""
    if model.kind == GAUSSIAN:
        s2 = model.sigma**2
        return -float(y) ** 2 / (2.0 * s2) - 0.5 * math.log(2.0 * math.pi * s2)
    _category_index(model, y)
    return 0.0


def _category_index(model: ConjugateModel, y) -> int:
    k = int(y)
    if k != y or not 1 <= k <= model.num_categories:
        raise ValueError(f"category must be an integer in [1, {model.num_categories}], got {y!r}")
    return k - 1


# ---------------------------------------------------------------------------
# Log-normalizer and densities
# ---------------------------------------------------------------------------

def log_norm(model: ConjugateModel, belief: Belief) -> float:
    """log f(chi, nu), the normalization factor of the conjugate density.

    ``f`` multiplies ``exp(theta . chi - nu * A(theta))``, i.e.
    ``f(chi, nu) = 1 / integral exp(theta . chi - nu A(theta)) dtheta`` with
    the family's base measure folded in.  Raises ``ValueError`` when
    ``(chi, nu)`` does not address a normalizable member.
    """
    if model.kind == GAUSSIAN:
        if belief.nu <= 0:
            raise ValueError("Gaussian belief not normalizable: nu must be > 0")
        return _gauss_log_norm(float(belief.chi[0]), belief.nu, model.sigma**2)
    alpha = belief.chi
    if np.any(alpha <= 0):
        raise ValueError("Dirichlet belief not normalizable: concentrations must be > 0")
    return float(gammaln(alpha.sum()) - gammaln(alpha).sum())


def _gauss_log_norm(chi: float, nu: float, s2: float) -> float:
    # -log integral of exp(chi*theta - nu*theta^2/(2 sigma^2)) over the real line
    return -0.5 * math.log(2.0 * math.pi * s2 / nu) - chi * chi * s2 / (2.0 * nu)


def predictive(model: ConjugateModel, belief: Belief, y) -> float:
    """P(y; belief): marginal probability (density or mass) of y under the belief.

    Closed forms: for the Gaussian family a normal density at ``y`` with mean
    the posterior mean and variance ``sigma^2`` plus the posterior variance;
    for the categorical family the Dirichlet mean ``alpha_y / sum(alpha)``.
    """
    if model.kind == GAUSSIAN:
        mean, var = gaussian_mean_var(model, belief)
        return _normal_pdf(float(y), mean, model.sigma**2 + var)
    alpha = belief.chi
    k = _category_index(model, y)
    return float(alpha[k] / alpha.sum())


def log_predictive(model: ConjugateModel, belief: Belief, y) -> float:
    """log P(y; belief) computed through the log-normalizer route.

    This is the numerically safe path used inside the estimators:
    ``log h(y) + log f(chi, nu) - log f(chi + phi(y), nu + 1)``.
    """
    if model.kind == GAUSSIAN:
        s2 = model.sigma**2
        chi = float(belief.chi[0])
        return (log_h(model, y)
                + _gauss_log_norm(chi, belief.nu, s2)
                - _gauss_log_norm(chi + float(y) / s2, belief.nu + 1.0, s2))
    alpha = belief.chi
    k = _category_index(model, y)
    return float(np.log(alpha[k]) - np.log(alpha.sum()))


def _normal_pdf(x: float, mean: float, var: float) -> float:
    return math.exp(-((x - mean) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def bayes_update(model: ConjugateModel, belief: Belief, y) -> Belief:
    """Conjugate posterior after observing y: (chi + phi(y), nu + 1)."""
    return Belief(belief.chi + sufficient_stat(model, y), belief.nu + 1.0)


def surprise_bf(model: ConjugateModel, belief: Belief, y) -> float:
    """Ratio of the predictive probability of y under the prior to that under the belief.

    Evaluated in log space through four log-normalizer terms, so extreme
    ratios neither underflow nor overflow prematurely.  An observation that
    is impossible under the current belief yields ``inf`` (the adaptation
    rate then saturates at 1).
    """
    log_s = log_surprise_bf(model, belief, y)
    return math.exp(log_s) if log_s < 709.0 else math.inf


def log_surprise_bf(model: ConjugateModel, belief: Belief, y) -> float:
    """log of :func:`surprise_bf`; the base-measure terms cancel in the ratio."""
    phi = sufficient_stat(model, y)
    post = Belief(belief.chi + phi, belief.nu + 1.0)
    prior = prior_belief(model)
    prior_post = Belief(prior.chi + phi, prior.nu + 1.0)
    return (log_norm(model, post) - log_norm(model, prior_post)
            + log_norm(model, prior) - log_norm(model, belief))


def kl(model: ConjugateModel, from_belief: Belief, to_belief: Belief) -> float:
    """KL divergence D(from || to) in nats, closed form per family."""
    if model.kind == GAUSSIAN:
        m1, v1 = gaussian_mean_var(model, from_belief)
        m2, v2 = gaussian_mean_var(model, to_belief)
        return 0.5 * (v1 / v2 + (m1 - m2) ** 2 / v2 - 1.0 + math.log(v2 / v1))
    a = from_belief.chi
    b = to_belief.chi
    a0 = a.sum()
    b0 = b.sum()
    return float(gammaln(a0) - gammaln(a).sum()
                 - gammaln(b0) + gammaln(b).sum()
                 + np.dot(a - b, digamma(a) - digamma(a0)))


def geometric_mix(model: ConjugateModel, a: Belief, b: Belief, gamma: float) -> Belief:
    """Renormalized geometric mixture exp((1-gamma) log a + gamma log b).

    In natural coordinates this is the componentwise affine combination of
    ``(chi, nu)`` pairs, exact for both families.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    return Belief((1.0 - gamma) * a.chi + gamma * b.chi,
                  (1.0 - gamma) * a.nu + gamma * b.nu)


def point_estimate(model: ConjugateModel, belief: Belief):
    """Posterior mean of theta: a float for Gaussian, a length-K vector for categorical."""
    if model.kind == GAUSSIAN:
        return gaussian_mean_var(model, belief)[0]
    alpha = belief.chi
    return alpha / alpha.sum()


def param_log_pdf(model: ConjugateModel, belief: Belief, theta) -> float:
    """Log density of the belief distribution evaluated at a parameter value."""
    if model.kind == GAUSSIAN:
        mean, var = gaussian_mean_var(model, belief)
        t = float(theta)
        return -((t - mean) ** 2) / (2.0 * var) - 0.5 * math.log(2.0 * math.pi * var)
    alpha = belief.chi
    p = np.asarray(theta, dtype=float)
    return float(gammaln(alpha.sum()) - gammaln(alpha).sum()
                 + np.dot(alpha - 1.0, np.log(p)))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_param(model: ConjugateModel, rng: np.random.Generator):
    """Draw theta from the prior: a float (Gaussian) or simplex vector (categorical)."""
    if model.kind == GAUSSIAN:
        prior = prior_belief(model)
        mean, var = gaussian_mean_var(model, prior)
        return float(rng.normal(mean, math.sqrt(var)))
    return rng.dirichlet(model.prior_chi)


def sample_obs(model: ConjugateModel, theta, rng: np.random.Generator):
    """Draw one observation from the likelihood at theta."""
    if model.kind == GAUSSIAN:
        return float(rng.normal(float(theta), model.sigma))
    cum = np.cumsum(np.asarray(theta, dtype=float))
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(k, model.num_categories - 1) + 1


# ---------------------------------------------------------------------------
# Vectorized kernels over particle arrays
# ---------------------------------------------------------------------------
# The mixture estimators track one (chi, nu) pair per particle.  These
# helpers operate on stacked arrays: Gaussian chi has shape (n,), categorical
# chi has shape (n, K).

def log_predictive_arr(model: ConjugateModel, chi: np.ndarray, nu: np.ndarray, y) -> np.ndarray:
    """log P(y; belief_i) for every particle i."""
    if model.kind == GAUSSIAN:
        s2 = model.sigma**2
        var = s2 / nu
        mean = chi * var
        pv = s2 + var
        return -((float(y) - mean) ** 2) / (2.0 * pv) - 0.5 * np.log(2.0 * math.pi * pv)
    k = _category_index(model, y)
    return np.log(chi[:, k]) - np.log(chi.sum(axis=1))


def posterior_mean_arr(model: ConjugateModel, chi: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Posterior mean of theta per particle: (n,) for Gaussian, (n, K) for categorical."""
    if model.kind == GAUSSIAN:
        return chi * (model.sigma**2 / nu)
    return chi / chi.sum(axis=1, keepdims=True)


def param_log_pdf_arr(model: ConjugateModel, chi: np.ndarray, nu: np.ndarray, theta) -> np.ndarray:
    """Log density of each particle's belief at one parameter value."""
    if model.kind == GAUSSIAN:
        var = model.sigma**2 / nu
        mean = chi * var
        return -((float(theta) - mean) ** 2) / (2.0 * var) - 0.5 * np.log(2.0 * math.pi * var)
    p = np.asarray(theta, dtype=float)
    return (gammaln(chi.sum(axis=1)) - gammaln(chi).sum(axis=1)
            + (chi - 1.0) @ np.log(p))
