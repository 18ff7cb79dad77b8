"""Online learning algorithms for abruptly changing environments.

Eight estimators share one contract: ``step(y)`` consumes the next
observation, updates the internal state, and returns a
:class:`~bayeschange.surprise.SurpriseRecord`; ``estimate()`` reads out the
current parameter estimate (posterior mean).  All of them modulate how much
an observation resets the belief toward the prior through the adaptation
rate ``gamma(s_bf, m)``:

* ``ExactBayes``: full mixture over run lengths, exact up to pruning of
  weights below 1e-300.
* ``MessagePassing`` (MP-N): same recursion with the particle count capped
  at N by discarding the minimum-weight particle.  Identical to ExactBayes
  while ``t <= N``.
* ``ParticleFilter`` (pf-N): sequential Monte Carlo over change histories
  with the optimal proposal; per-particle reset flags are sampled with
  probability ``gamma(s_bf_i, m)`` and multinomial resampling triggers when
  the effective sample size drops to ``N/2`` (configurable).
* ``VarSMiLe``: variational single-belief rule; mixes the natural
  parameters of integrate-and-reset updates with weight ``gamma``.
* ``SMiLe``: single-belief rule driven by confidence-corrected surprise; a
  KL-ball constraint toward the scaled likelihood is solved by bisection.
* ``NasStar`` (nas10 / nas12 variants): delta-rule family for the Gaussian
  task with an adaptive learning rate built from an estimated time since
  the last change.
* ``LeakyIntegrator``: exponentially discounted averages.

Mixture weights are stored as log-weights and normalized by log-sum-exp;
changing ``m`` trades off how aggressively surprise resets the belief
(exact inference uses ``m = p_c / (1 - p_c)``).

States are owned by a single sequence processor; none of the classes share
mutable state, so independent runs parallelize freely.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit, log_expit

from . import expfam
from .expfam import GAUSSIAN, Belief, ConjugateModel, log_predictive_arr, posterior_mean_arr
from .surprise import SurpriseRecord, adaptation_rate, make_record

__all__ = [
    "NumericError",
    "OnlineEstimator",
    "ExactBayes",
    "MessagePassing",
    "ParticleFilter",
    "VarSMiLe",
    "SMiLe",
    "NasStar",
    "LeakyIntegrator",
    "make_estimator",
    "parse_algorithm",
    "TUNABLE_PARAM",
]

_LOG_WEIGHT_CUTOFF = math.log(1e-300)


class NumericError(RuntimeError):
    """A numerical procedure failed to converge."""


def _normal_logpdf(x: float, mean: float, var: float) -> float:
    return -((x - mean) ** 2) / (2.0 * var) - 0.5 * math.log(2.0 * math.pi * var)


def _lse(x: np.ndarray) -> float:
    m = x.max()
    if not np.isfinite(m):
        return float(m)
    return float(m + math.log(np.exp(x - m).sum()))


class OnlineEstimator:
    """Common contract: step(y) -> SurpriseRecord, estimate() -> parameter."""

    def __init__(self, model: ConjugateModel, m: float):
        if m <= 0:
            raise ValueError(f"modulation m must be > 0, got {m}")
        self.model = model
        self.m = float(m)
        self._log_m = math.log(m)
        s2 = model.sigma**2 if model.kind == GAUSSIAN else 0.0
        self._s2 = s2
        if model.kind == GAUSSIAN:
            self._chi0 = float(model.prior_chi[0])
            self._mu0 = self._chi0 * s2 / model.prior_nu
            self._var0 = s2 / model.prior_nu
        else:
            self._chi0 = model.prior_chi.copy()
            self._log_prior_pred = np.log(self._chi0) - math.log(self._chi0.sum())
        self._nu0 = model.prior_nu

    def _log_p_prior(self, y) -> float:
        """Log predictive of y under the prior belief."""
        if self.model.kind == GAUSSIAN:
            return _normal_logpdf(float(y), self._mu0, self._s2 + self._var0)
        return float(self._log_prior_pred[y - 1])

    def _phi(self, y):
        if self.model.kind == GAUSSIAN:
            return float(y) / self._s2
        phi = np.zeros(self.model.num_categories)
        phi[y - 1] = 1.0
        return phi

    def step(self, y) -> SurpriseRecord:
        raise NotImplementedError

    def estimate(self):
        raise NotImplementedError

    def posterior_std(self) -> float:
        """Standard deviation of the belief over theta (Gaussian models only)."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Single-belief estimators
# ---------------------------------------------------------------------------

class _SingleBelief(OnlineEstimator):
    def __init__(self, model: ConjugateModel, m: float):
        super().__init__(model, m)
        self._chi = self._chi0.copy() if model.kind != GAUSSIAN else self._chi0
        self._nu = self._nu0

    @property
    def belief(self) -> Belief:
        return Belief(np.atleast_1d(self._chi), self._nu)

    def _log_p_current(self, y) -> float:
        if self.model.kind == GAUSSIAN:
            var = self._s2 / self._nu
            return _normal_logpdf(float(y), self._chi * var, self._s2 + var)
        a = self._chi
        ak = a[y - 1]
        return (math.log(ak) if ak > 0 else -math.inf) - math.log(a.sum())

    def estimate(self):
        if self.model.kind == GAUSSIAN:
            return self._chi * self._s2 / self._nu
        return self._chi / self._chi.sum()

    def posterior_std(self) -> float:
        if self.model.kind != GAUSSIAN:
            raise ValueError("posterior_std is defined for Gaussian models only")
        return math.sqrt(self._s2 / self._nu)


class VarSMiLe(_SingleBelief):
    """Variational surprise-minimization rule.

    The natural parameters of the Bayes-updated belief and of the
    reset-then-update belief are mixed with weight ``gamma(s_bf, m)``:
    ``chi' = (1 - g) chi + g chi0 + phi(y)`` and
    ``nu' = (1 - g) nu + g nu0 + 1``.
    """

    def step(self, y) -> SurpriseRecord:
        rec = make_record(self._log_p_current(y), self._log_p_prior(y), self.m)
        g = rec.gamma
        self._chi = (1.0 - g) * self._chi + g * self._chi0 + self._phi(y)
        self._nu = (1.0 - g) * self._nu + g * self._nu0 + 1.0
        return rec


class SMiLe(_SingleBelief):
    """Surprise-minimization rule driven by confidence-corrected surprise.

    The update mixes the current belief with the scaled likelihood of the
    observation; the mixing rate is the one at which the KL divergence of
    the mixed belief from the old belief hits a bound
    ``B = B_max * gamma(s_cc, m)``.  The KL divergence grows monotonically
    along the mixing path, so plain bisection finds the rate.
    """

    def __init__(self, model: ConjugateModel, m: float,
                 max_iter: int = 100, tol: float = 1e-8):
        super().__init__(model, m)
        self.max_iter = max_iter
        self.tol = tol

    def _kl_gauss(self, m1, v1, m2, v2) -> float:
        return 0.5 * (v1 / v2 + (m1 - m2) ** 2 / v2 - 1.0 + math.log(v2 / v1))

    def step(self, y) -> SurpriseRecord:
        model = self.model
        if model.kind == GAUSSIAN:
            chi_sl, nu_sl = float(y) / self._s2, 1.0

            def kl_between(chi_a, nu_a, chi_b, nu_b):
                va, vb = self._s2 / nu_a, self._s2 / nu_b
                return self._kl_gauss(chi_a * va, va, chi_b * vb, vb)
        else:
            chi_sl = np.ones(model.num_categories) + self._phi(y)
            nu_sl = 1.0
            bel = lambda chi, nu: Belief(chi, nu)

            def kl_between(chi_a, nu_a, chi_b, nu_b):
                return expfam.kl(model, bel(chi_a, nu_a), bel(chi_b, nu_b))

        chi, nu = self._chi, self._nu
        s_cc = kl_between(chi, nu, chi_sl, nu_sl)
        rec = make_record(self._log_p_current(y), self._log_p_prior(y), self.m, s_cc=s_cc)

        b_max = kl_between(chi_sl, nu_sl, chi, nu)
        b = b_max * adaptation_rate(s_cc, self.m)
        g = self._solve_mix_rate(
            lambda t: kl_between((1.0 - t) * chi + t * chi_sl,
                                 (1.0 - t) * nu + t * nu_sl, chi, nu),
            b, b_max)
        self._chi = (1.0 - g) * chi + g * chi_sl
        self._nu = (1.0 - g) * nu + g * nu_sl
        return rec

    def _solve_mix_rate(self, kl_of_mix, b: float, b_max: float) -> float:
        if b <= self.tol:
            return 0.0
        if b >= b_max - self.tol:
            return 1.0
        lo, hi = 0.0, 1.0
        for _ in range(self.max_iter):
            mid = 0.5 * (lo + hi)
            v = kl_of_mix(mid) - b
            if abs(v) <= self.tol:
                return mid
            if v > 0.0:
                hi = mid
            else:
                lo = mid
        raise NumericError(
            f"mixing-rate bisection did not converge: target KL {b:.6g} of "
            f"max {b_max:.6g}, bracket [{lo:.17g}, {hi:.17g}]")


class NasStar(OnlineEstimator):
    """Surprise-modulated delta rule for the Gaussian task.

    Tracks the estimated mean, its variance, and the estimated time ``r``
    since the last change.  The mean update averages, with weight
    ``gamma(s_bf, m)``, a conjugate increment toward the observation and a
    restart from the prior mean.  The two variants differ in how ``r`` is
    propagated: ``nas10`` averages the grow/reset outcomes of ``r``
    directly, ``nas12`` derives ``r`` from a variance recursion that keeps
    the spread of the grow/reset mixture.
    """

    def __init__(self, model: ConjugateModel, m: float, variant: str = "nas12"):
        if model.kind != GAUSSIAN:
            raise ValueError("NasStar supports Gaussian models only")
        if variant not in ("nas10", "nas12"):
            raise ValueError(f"variant must be 'nas10' or 'nas12', got {variant!r}")
        super().__init__(model, m)
        self.variant = variant
        self.mu_hat = self._mu0
        self.var_hat = self._var0
        self.r_hat = 0.0
        self._rho = self._s2 / self._var0

    def step(self, y) -> SurpriseRecord:
        y = float(y)
        log_p_cur = _normal_logpdf(y, self.mu_hat, self._s2 + self.var_hat)
        rec = make_record(log_p_cur, self._log_p_prior(y), self.m)
        g = rec.gamma
        rho, r = self._rho, self.r_hat
        mu_stay = self.mu_hat + (y - self.mu_hat) / (rho + r + 1.0)
        mu_change = self._mu0 + (y - self._mu0) / (rho + 1.0)
        self.mu_hat = (1.0 - g) * mu_stay + g * mu_change
        if self.variant == "nas10":
            r_new = (1.0 - g) * (r + 1.0) + g
            self.r_hat = r_new
            self.var_hat = self._s2 / (rho + r_new)
        else:
            alpha = (rho + g * r + 1.0) / (rho + r + 1.0)
            spread = mu_stay - mu_change
            var_new = self._s2 * alpha / (rho + 1.0) + (1.0 - g) * g * spread**2
            self.var_hat = var_new
            # r is a time interval; floating error may push it slightly negative
            self.r_hat = max(self._s2 / var_new - rho, 0.0)
        return rec

    def estimate(self) -> float:
        return self.mu_hat

    def posterior_std(self) -> float:
        return math.sqrt(self.var_hat)


class LeakyIntegrator(OnlineEstimator):
    """Exponentially discounted running estimate with leak ``omega``.

    ``omega = 1`` gives the running mean / empirical frequencies; smaller
    values forget faster.  The estimator itself carries no belief, so the
    surprise record is produced from a stand-in belief that is
    moment-matched to the current estimate with the prior's dispersion
    (documented convention; see the package README).  ``m`` only enters
    that record, not the estimate.
    """

    def __init__(self, model: ConjugateModel, omega: float, m: float):
        if not 0.0 < omega <= 1.0:
            raise ValueError(f"omega must be in (0, 1], got {omega}")
        super().__init__(model, m)
        self.omega = float(omega)
        self._den = 0.0
        self._num = 0.0 if model.kind == GAUSSIAN else np.zeros(model.num_categories)

    def step(self, y) -> SurpriseRecord:
        if self.model.kind == GAUSSIAN:
            mean_prev = self._num / self._den if self._den > 0 else self._mu0
            log_p_cur = _normal_logpdf(float(y), mean_prev, self._s2 + self._var0)
            inc = float(y)
        else:
            if self._den > 0:
                pk = self._num[y - 1] / self._den
                log_p_cur = math.log(pk) if pk > 0 else -math.inf
            else:
                log_p_cur = self._log_p_prior(y)
            inc = self._phi(y)
        rec = make_record(log_p_cur, self._log_p_prior(y), self.m)
        self._den = self.omega * self._den + 1.0
        self._num = self.omega * self._num + inc
        return rec

    def estimate(self):
        if self._den == 0.0:
            if self.model.kind == GAUSSIAN:
                return self._mu0
            return self._chi0 / self._chi0.sum()
        return self._num / self._den

    def posterior_std(self) -> float:
        if self.model.kind != GAUSSIAN:
            raise ValueError("posterior_std is defined for Gaussian models only")
        return math.sqrt(self._var0)


# ---------------------------------------------------------------------------
# Mixture estimators: exact inference and message passing
# ---------------------------------------------------------------------------

class _MixtureEstimator(OnlineEstimator):
    """Weighted mixture of conjugate beliefs, one per candidate run length.

    Particles live in preallocated buffers and weights stay in log space.
    Because every particle has seen exactly ``run_length`` observations, its
    pseudo-count is ``nu0 + run_length``; the run-length-indexed parts of
    the predictive density are therefore cached once instead of being
    recomputed per particle and step.
    """

    def __init__(self, model: ConjugateModel, m: float):
        super().__init__(model, m)
        self._n = 1
        self._t = 0
        cap = 64
        if model.kind == GAUSSIAN:
            self._chi = np.empty(cap)
            self._chi[0] = self._chi0
        else:
            self._chi = np.empty((cap, model.num_categories))
            self._chi[0] = model.prior_chi
        self._log_w = np.empty(cap)
        self._log_w[0] = 0.0
        self._rlen = np.empty(cap, dtype=np.int64)
        self._rlen[0] = 0
        self._tables = _PredictiveTables(model, self._nu0)

    @property
    def n_particles(self) -> int:
        return self._n

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self._log_w[:self._n])

    @property
    def run_lengths(self) -> np.ndarray:
        return self._rlen[:self._n].copy()

    def particle_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Copies of the per-particle natural parameters (chi, nu)."""
        return self._chi[:self._n].copy(), self._nu0 + self._rlen[:self._n].astype(float)

    def _grow(self) -> None:
        cap = 2 * len(self._log_w)
        for name in ("_chi", "_log_w", "_rlen"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
            new[:self._n] = old[:self._n]
            setattr(self, name, new)

    def step(self, y) -> SurpriseRecord:
        model = self.model
        log_p_prior = self._log_p_prior(y)
        phi = self._phi(y)
        if self._t == 0:
            # the first parameter is drawn from the prior by construction, so
            # the posterior after y_1 is a single particle at the reset belief
            rec = make_record(log_p_prior, log_p_prior, self.m)
            self._chi[0] += phi
            self._rlen[0] = 1
            self._t = 1
            return rec

        n = self._n
        chi = self._chi[:n]
        log_w = self._log_w[:n]
        rlen = self._rlen[:n]
        lp = self._tables.log_predictive(chi, rlen, y)

        lw_lp = log_w + lp
        mx = lw_lp.max()
        shifted = np.exp(lw_lp - mx)
        log_p_mix = mx + math.log(shifted.sum())
        rec = make_record(log_p_mix, log_p_prior, self.m)
        z = self._log_m + (log_p_prior - log_p_mix)

        # surviving weights (1 - gamma) w_B, new particle weight gamma
        np.subtract(lw_lp, log_p_mix - float(log_expit(-z)), out=log_w)
        chi += phi
        rlen += 1

        if n == len(self._log_w):
            self._grow()
        self._chi[n] = self._chi0 + phi
        self._rlen[n] = 1
        self._log_w[n] = float(log_expit(z))
        self._n = n + 1
        self._truncate()
        self._t += 1
        return rec

    def _truncate(self) -> None:
        raise NotImplementedError

    def _keep(self, idx: np.ndarray) -> None:
        k = len(idx)
        self._chi[:k] = self._chi[idx]
        self._log_w[:k] = self._log_w[idx]
        self._rlen[:k] = self._rlen[idx]
        self._n = k
        self._log_w[:k] -= _lse(self._log_w[:k])

    def estimate(self):
        w = np.exp(self._log_w[:self._n])
        means = self._tables.posterior_mean(self._chi[:self._n], self._rlen[:self._n])
        if self.model.kind == GAUSSIAN:
            return float(w @ means)
        return w @ means

    def posterior_std(self) -> float:
        if self.model.kind != GAUSSIAN:
            raise ValueError("posterior_std is defined for Gaussian models only")
        w = np.exp(self._log_w[:self._n])
        var_i = self._s2 / (self._nu0 + self._rlen[:self._n])
        mean_i = self._chi[:self._n] * var_i
        mean = float(w @ mean_i)
        return math.sqrt(max(float(w @ (var_i + mean_i**2)) - mean**2, 0.0))


class _PredictiveTables:
    """Run-length-indexed caches of predictive-density constants.

    For the Gaussian family the posterior variance, predictive precision,
    and predictive log-normalization depend only on the particle's
    pseudo-count ``nu0 + r``; for the categorical family the concentration
    total does.  Caching them replaces per-step log evaluations with
    gathers.
    """

    def __init__(self, model: ConjugateModel, nu0: float):
        self.model = model
        self.nu0 = nu0
        self._len = 0
        self._extend(256)

    def _extend(self, size: int) -> None:
        if size <= self._len:
            return
        size = max(size, 2 * self._len)
        r = np.arange(size, dtype=float)
        if self.model.kind == GAUSSIAN:
            s2 = self.model.sigma**2
            self.var = s2 / (self.nu0 + r)
            pv = s2 + self.var
            self.neg_inv2pv = -0.5 / pv
            self.log_c = -0.5 * np.log(2.0 * math.pi * pv)
        else:
            total0 = float(self.model.prior_chi.sum())
            self.log_alpha_sum = np.log(total0 + r)
            self.alpha_sum = total0 + r
        self._len = size

    def log_predictive(self, chi: np.ndarray, rlen: np.ndarray, y) -> np.ndarray:
        if rlen.max() >= self._len:
            self._extend(int(rlen.max()) + 1)
        if self.model.kind == GAUSSIAN:
            d = float(y) - chi * self.var[rlen]
            return d * d * self.neg_inv2pv[rlen] + self.log_c[rlen]
        with np.errstate(divide="ignore"):
            return np.log(chi[:, y - 1]) - self.log_alpha_sum[rlen]

    def posterior_mean(self, chi: np.ndarray, rlen: np.ndarray) -> np.ndarray:
        if rlen.max(initial=0) >= self._len:
            self._extend(int(rlen.max()) + 1)
        if self.model.kind == GAUSSIAN:
            return chi * self.var[rlen]
        return chi / self.alpha_sum[rlen][:, None]


class ExactBayes(_MixtureEstimator):
    """Exact run-length mixture, pruned only at weights below 1e-300.

    Memory stays finite on long runs because particle weights eventually
    fall below the cutoff; until then the recursion is exact.
    """

    def _truncate(self) -> None:
        log_w = self._log_w[:self._n]
        if log_w.min() < _LOG_WEIGHT_CUTOFF:
            self._keep(np.flatnonzero(log_w >= _LOG_WEIGHT_CUTOFF))


class MessagePassing(_MixtureEstimator):
    """Run-length mixture capped at N particles (MP-N).

    While ``t <= N`` the recursion is the exact one; afterwards the single
    minimum-weight particle is discarded each step (lowest index on ties)
    and the weights are renormalized.
    """

    def __init__(self, model: ConjugateModel, n_particles: int, m: float):
        if n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        super().__init__(model, m)
        self.max_particles = int(n_particles)

    def _truncate(self) -> None:
        if self._n > self.max_particles:
            drop = int(np.argmin(self._log_w[:self._n]))
            idx = np.arange(self._n)
            self._keep(np.delete(idx, drop))


# ---------------------------------------------------------------------------
# Particle filtering
# ---------------------------------------------------------------------------

class ParticleFilter(OnlineEstimator):
    """Sequential Monte Carlo over change histories with the optimal proposal.

    Weight update: ``w' = (1 - gamma) w_B + gamma w`` with the global
    ``gamma`` from the weighted harmonic mean of per-particle surprises.
    Each particle then samples a reset flag with its own
    ``gamma(s_bf_i, m)``.  Multinomial resampling triggers when the
    effective sample size ``1 / sum(w'^2)`` is at most ``resample_threshold``
    (N/2 unless configured otherwise).
    """

    def __init__(self, model: ConjugateModel, n_particles: int, m: float,
                 rng, resample_threshold: float | None = None):
        if n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        super().__init__(model, m)
        self.n = int(n_particles)
        self.resample_threshold = self.n / 2.0 if resample_threshold is None else float(resample_threshold)
        self._rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        if model.kind == GAUSSIAN:
            self._chi = np.full(self.n, self._chi0)
        else:
            self._chi = np.tile(model.prior_chi, (self.n, 1))
        self._nu = np.full(self.n, self._nu0)
        self._log_w = np.full(self.n, -math.log(self.n))

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self._log_w)

    def step(self, y) -> SurpriseRecord:
        rec, gam_i = self._update_weights(y)
        flags = self._rng.random(self.n) < gam_i
        self._maybe_resample(flags)
        self._apply_flags(y, flags)
        return rec

    def _update_weights(self, y):
        log_p_prior = self._log_p_prior(y)
        lp = log_predictive_arr(self.model, self._chi, self._nu, y)
        lw_lp = self._log_w + lp
        log_p_mix = _lse(lw_lp)
        rec = make_record(log_p_mix, log_p_prior, self.m)
        z = self._log_m + (log_p_prior - log_p_mix)
        log_wb = lw_lp - log_p_mix
        self._log_w = np.logaddexp(float(log_expit(-z)) + log_wb,
                                   float(log_expit(z)) + self._log_w)
        self._log_w -= _lse(self._log_w)
        z_i = self._log_m + (log_p_prior - lp)
        return rec, expit(z_i)

    def _maybe_resample(self, flags: np.ndarray) -> None:
        w = np.exp(self._log_w)
        n_eff = 1.0 / float(w @ w)
        if n_eff <= self.resample_threshold:
            idx = self._rng.choice(self.n, size=self.n, p=w / w.sum())
            self._chi = self._chi[idx]
            self._nu = self._nu[idx]
            flags[:] = flags[idx]
            self._log_w = np.full(self.n, -math.log(self.n))

    def _apply_flags(self, y, flags: np.ndarray) -> None:
        phi = self._phi(y)
        if self.model.kind == GAUSSIAN:
            self._chi = np.where(flags, self._chi0 + phi, self._chi + phi)
        else:
            self._chi = np.where(flags[:, None], self._chi0 + phi, self._chi + phi)
        self._nu = np.where(flags, self._nu0 + 1.0, self._nu + 1.0)

    def estimate(self):
        w = np.exp(self._log_w)
        means = posterior_mean_arr(self.model, self._chi, self._nu)
        if self.model.kind == GAUSSIAN:
            return float(w @ means)
        return w @ means

    def posterior_std(self) -> float:
        if self.model.kind != GAUSSIAN:
            raise ValueError("posterior_std is defined for Gaussian models only")
        w = np.exp(self._log_w)
        var_i = self._s2 / self._nu
        mean_i = self._chi * var_i
        mean = float(w @ mean_i)
        return math.sqrt(max(float(w @ (var_i + mean_i**2)) - mean**2, 0.0))


# ---------------------------------------------------------------------------
# Factory and registry
# ---------------------------------------------------------------------------

# tunable free parameter per algorithm kind: an assumed change probability,
# the surprise modulation m, or the leak omega
TUNABLE_PARAM = {
    "exact": "p_c",
    "mp": "p_c",
    "pf": "p_c",
    "nas10": "p_c",
    "nas12": "p_c",
    "var_smile": "m",
    "smile": "m",
    "leaky": "omega",
}


def parse_algorithm(name: str) -> tuple[str, int | None]:
    """Split names like ``pf20`` / ``mp1`` into (kind, particle count)."""
    for prefix in ("pf", "mp"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return prefix, int(name[len(prefix):])
    if name in TUNABLE_PARAM:
        return name, None
    raise ValueError(f"unknown algorithm {name!r}")


def make_estimator(kind: str, model: ConjugateModel, param: float,
                   n_particles: int = 20, seed=None,
                   record_p_c: float | None = None) -> OnlineEstimator:
    """Build an estimator from its kind and tunable parameter value.

    ``param`` is interpreted per :data:`TUNABLE_PARAM`: an assumed change
    probability for exact/mp/pf/nas10/nas12 (converted to
    ``m = p_c / (1 - p_c)``), the modulation ``m`` for var_smile/smile, and
    the leak ``omega`` for leaky.  ``seed`` feeds the particle filter's
    sampler; ``record_p_c`` sets the change probability used only in the
    leaky integrator's surprise records (defaults to ``param`` of the
    environment when tuning, see evaluation helpers).
    """
    if kind in ("exact", "mp", "pf", "nas10", "nas12"):
        if not 0.0 < param < 1.0:
            raise ValueError(f"assumed p_c must be in (0, 1), got {param}")
        m = param / (1.0 - param)
    if kind == "exact":
        return ExactBayes(model, m)
    if kind == "mp":
        return MessagePassing(model, n_particles, m)
    if kind == "pf":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return ParticleFilter(model, n_particles, m, rng)
    if kind in ("nas10", "nas12"):
        return NasStar(model, m, variant=kind)
    if kind == "var_smile":
        return VarSMiLe(model, param)
    if kind == "smile":
        return SMiLe(model, param)
    if kind == "leaky":
        if record_p_c is None:
            raise ValueError("leaky requires record_p_c for its surprise records")
        return LeakyIntegrator(model, param, record_p_c / (1.0 - record_p_c))
    raise ValueError(f"unknown algorithm kind {kind!r}")
