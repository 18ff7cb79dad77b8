"""Binned-surprise experiments that dissociate two surprise measures.

Both experiments run a learning algorithm over Gaussian-task traces for a
population of simulated subjects (one random stream each) and average
surprise values inside bins of experimentally observable quantities.

Experiment 1 bins time points by the absolute prediction, the absolute
prediction error delta, the confidence (belief standard deviation), and the
sign bias ``s = sign(error * prediction)``.  Within matched bins, the
Bayes-factor surprise is larger when the prediction was an underestimate in
absolute value (s = -1) while the Shannon surprise shows the opposite
pattern, and the gap widens with delta.

Experiment 2 bins time points where the predictive probability of the
observation is (approximately) the same value p under both the current and
the prior belief.  There the Bayes-factor surprise is 1 regardless of p,
while the Shannon surprise decreases in p.

Binned dimensions tile half-open intervals centered on the configured grid
points, so every time point lands in at most one bin per dimension.  Bin
half-widths follow the protocol values (0.1 for the error bins, 0.0125 for
the probability bins); the default grids are spaced at twice the half-width
so the tiling is disjoint and gap-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .environment import derive_seed, gaussian_task, simulate
from .estimators import make_estimator

__all__ = ["PredictionConfig", "run_prediction1", "run_prediction2",
           "SubjectTrace", "collect_subject"]

_DEF_DELTA_GRID = tuple(np.round(np.arange(0.2, 1.4 + 1e-9, 0.2), 10))
_DEF_P_GRID = tuple(np.round(np.arange(0.05, 0.35 + 1e-9, 0.025), 10))


@dataclass(frozen=True)
class PredictionConfig:
    """Protocol parameters for the two binned-surprise experiments.

    Defaults follow the simulated-subject protocol: 20 subjects, 500 steps,
    sigma = 0.5, p_c = 0.1, prediction anchor 1, confidence anchor 0.5.
    ``d_theta``, ``d_delta``, ``d_sigma_c``, and ``d_p`` are half-widths of
    the acceptance windows (the confidence window of 1.0 is nearly
    all-inclusive on purpose).  The error and probability grids are spaced
    at twice their half-widths, so their bins tile without overlap.
    """

    kind: str = "pf"
    param: float = 0.1
    n_particles: int = 20
    sigma: float = 0.5
    p_c: float = 0.1
    horizon: int = 500
    n_subjects: int = 20
    theta_anchor: float = 1.0
    sigma_c: float = 0.5
    d_theta: float = 0.25
    d_delta: float = 0.1
    d_sigma_c: float = 1.0
    d_p: float = 0.0125
    delta_grid: tuple = _DEF_DELTA_GRID
    p_grid: tuple = _DEF_P_GRID

    def __post_init__(self):
        if min(self.d_theta, self.d_delta, self.d_sigma_c, self.d_p) <= 0:
            raise ValueError("bin widths must be > 0")
        if len(self.delta_grid) == 0 or len(self.p_grid) == 0:
            raise ValueError("grids must be non-empty")


@dataclass
class SubjectTrace:
    """Per-step quantities saved while one subject runs the task.

    ``prev_mean`` and ``prev_std`` describe the belief in force when the
    observation arrived (the subject's prediction and confidence),
    ``delta`` is the prediction error, ``sign`` the sign bias, and
    ``p_current`` / ``p_prior`` the predictive probabilities of the
    observation under the current and prior beliefs.
    """

    prev_mean: np.ndarray
    prev_std: np.ndarray
    delta: np.ndarray
    sign: np.ndarray
    s_bf: np.ndarray
    s_sh: np.ndarray
    p_current: np.ndarray
    p_prior: np.ndarray


def collect_subject(config: PredictionConfig, seed: int, subject: int) -> SubjectTrace:
    """Run one subject and record the per-step quantities both experiments use."""
    env = gaussian_task(config.sigma, config.p_c, config.horizon,
                        derive_seed(seed, subject, 0))
    trace = simulate(env)
    est = make_estimator(config.kind, env.model, config.param,
                         n_particles=config.n_particles,
                         seed=derive_seed(seed, subject, 1),
                         record_p_c=config.p_c)
    T = config.horizon
    prev_mean = np.empty(T)
    prev_std = np.empty(T)
    s_bf = np.empty(T)
    s_sh = np.empty(T)
    p_prior = np.empty(T)
    for t in range(T):
        prev_mean[t] = est.estimate()
        prev_std[t] = est.posterior_std()
        rec = est.step(trace.observations[t])
        s_bf[t] = rec.s_bf
        s_sh[t] = rec.s_sh_current
        p_prior[t] = math.exp(-rec.s_sh_prior)
    with np.errstate(divide="ignore"):
        p_current = np.where(np.isinf(s_bf), 0.0, p_prior / s_bf)
    delta = trace.observations - prev_mean
    return SubjectTrace(prev_mean, prev_std, delta, np.sign(delta * prev_mean),
                        s_bf, s_sh, p_current, p_prior)


def _bin_index(values: np.ndarray, grid: np.ndarray, half_width: float) -> np.ndarray:
    """Nearest grid point within half_width (half-open on the right), else -1."""
    idx = np.clip(np.searchsorted(grid, values), 0, len(grid) - 1)
    left = np.clip(idx - 1, 0, len(grid) - 1)
    use_left = np.abs(values - grid[left]) < np.abs(values - grid[idx])
    nearest = np.where(use_left, left, idx)
    dist = values - grid[nearest]
    inside = (dist >= -half_width) & (dist < half_width)
    return np.where(inside, nearest, -1)


def _sem(values: list[float]) -> float:
    arr = np.asarray(values)
    if len(arr) < 2:
        return math.nan
    return float(arr.std(ddof=1) / math.sqrt(len(arr)))


def run_prediction1(config: PredictionConfig, seed: int) -> list[dict]:
    """Sign-bias experiment: averaged surprises per (delta bin, sign).

    Returns one row per (delta, sign) with across-subject means and
    standard errors; bins with fewer than two contributing subjects carry
    NaN markers instead of being dropped.
    """
    grid = np.asarray(config.delta_grid, dtype=float)
    per_subject_bf = {(j, s): [] for j in range(len(grid)) for s in (-1, 1)}
    per_subject_sh = {(j, s): [] for j in range(len(grid)) for s in (-1, 1)}
    for subject in range(config.n_subjects):
        st = collect_subject(config, seed, subject)
        eligible = ((np.abs(np.abs(st.prev_mean) - config.theta_anchor) < config.d_theta)
                    & (np.abs(st.prev_std - config.sigma_c) < config.d_sigma_c))
        dbin = _bin_index(np.abs(st.delta), grid, config.d_delta)
        for s in (-1, 1):
            sel_s = eligible & (st.sign == s) & (dbin >= 0)
            for j in np.unique(dbin[sel_s]):
                sel = sel_s & (dbin == j)
                per_subject_bf[(int(j), s)].append(float(st.s_bf[sel].mean()))
                per_subject_sh[(int(j), s)].append(float(st.s_sh[sel].mean()))
    rows = []
    for j, delta in enumerate(grid):
        for s in (-1, 1):
            bf = per_subject_bf[(j, s)]
            sh = per_subject_sh[(j, s)]
            rows.append({
                "delta": float(delta), "sign": s,
                "n_subjects": len(bf),
                "mean_sbf": float(np.mean(bf)) if bf else math.nan,
                "sem_sbf": _sem(bf),
                "mean_ssh": float(np.mean(sh)) if sh else math.nan,
                "sem_ssh": _sem(sh),
            })
    return rows


def run_prediction2(config: PredictionConfig, seed: int) -> list[dict]:
    """Matched-predictive experiment: averaged surprises per probability bin.

    A time point contributes to bin p only when both predictive
    probabilities fall in the same half-open interval around p.
    """
    grid = np.asarray(config.p_grid, dtype=float)
    per_subject_bf = {j: [] for j in range(len(grid))}
    per_subject_sh = {j: [] for j in range(len(grid))}
    for subject in range(config.n_subjects):
        st = collect_subject(config, seed, subject)
        bin_cur = _bin_index(st.p_current, grid, config.d_p)
        bin_pri = _bin_index(st.p_prior, grid, config.d_p)
        matched = (bin_cur >= 0) & (bin_cur == bin_pri)
        for j in np.unique(bin_cur[matched]):
            sel = matched & (bin_cur == j)
            per_subject_bf[int(j)].append(float(st.s_bf[sel].mean()))
            per_subject_sh[int(j)].append(float(st.s_sh[sel].mean()))
    rows = []
    for j, p in enumerate(grid):
        bf = per_subject_bf[j]
        sh = per_subject_sh[j]
        rows.append({
            "p": float(p),
            "n_subjects": len(bf),
            "mean_sbf": float(np.mean(bf)) if bf else math.nan,
            "sem_sbf": _sem(bf),
            "mean_ssh": float(np.mean(sh)) if sh else math.nan,
            "sem_ssh": _sem(sh),
        })
    return rows
