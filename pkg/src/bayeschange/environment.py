"""Sampler for the hierarchical change-point generative model.

The environment is piecewise stationary: at every step the latent parameter
is redrawn from the prior with probability ``p_c`` (a change point) and kept
otherwise, and an observation is emitted from the likelihood at the current
parameter.  The first step is always a change point, so the first parameter
comes from the prior.

Two benchmark tasks instantiate the model:

* Gaussian task: estimate a mean under N(theta, sigma^2) noise, prior
  theta ~ N(0, 1), for sigma in {0.1, 0.5, 1, 2, 5}.
* Categorical task: estimate occurrence probabilities of K = 5 states,
  prior Dirichlet(s * 1), for s in {0.01, 0.1, 0.14, 0.25, 1, 2, 5}.

Randomness is keyed by ``(seed, stream ids...)`` through numpy's
SeedSequence, so parameter sweeps can draw independent, reproducible streams
per cell without coordination.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .expfam import CATEGORICAL, GAUSSIAN, ConjugateModel, categorical_model, gaussian_model

__all__ = [
    "EnvConfig",
    "EnvTrace",
    "simulate",
    "gaussian_task",
    "categorical_task",
    "rng_for",
    "derive_seed",
    "run_lengths_from_changes",
    "write_trace_csv",
]


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator keyed by (seed, stream ids)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=(int(seed), *map(int, stream))))


def derive_seed(seed: int, *stream: int) -> int:
    """A 64-bit child seed keyed by (seed, stream ids)."""
    state = np.random.SeedSequence(entropy=(int(seed), *map(int, stream))).generate_state(2)
    return int(state[0]) | (int(state[1]) << 32)


@dataclass(frozen=True)
class EnvConfig:
    """One environment cell: model, change probability, horizon, seed."""

    model: ConjugateModel
    p_c: float
    horizon: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.p_c < 1.0:
            raise ValueError(f"p_c must be strictly inside (0, 1), got {self.p_c}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")


@dataclass(frozen=True)
class EnvTrace:
    """Aligned observation/parameter/change sequences produced by simulate.

    ``params`` has shape (T,) for the Gaussian task and (T, K) for the
    categorical task.  ``run_lengths[t]`` is the number of steps since the
    most recent change point, counting the change step itself as 1.
    """

    observations: np.ndarray
    params: np.ndarray
    changes: np.ndarray
    run_lengths: np.ndarray


def run_lengths_from_changes(changes: np.ndarray) -> np.ndarray:
    """Steps since the last change point, 1 at each change step."""
    t = np.arange(1, len(changes) + 1)
    last_change = np.maximum.accumulate(np.where(changes, t, 0))
    return t - last_change + 1


def simulate(config: EnvConfig) -> EnvTrace:
    """Sample a trace from the generative model, deterministic given the seed."""
    rng = rng_for(config.seed, 0)
    model = config.model
    T = config.horizon

    changes = np.empty(T, dtype=bool)
    changes[0] = True  # the first parameter is always drawn from the prior
    if T > 1:
        changes[1:] = rng.random(T - 1) < config.p_c
    seg_ids = np.cumsum(changes) - 1
    n_seg = seg_ids[-1] + 1

    if model.kind == GAUSSIAN:
        prior_std = model.sigma / np.sqrt(model.prior_nu)
        prior_mean = model.prior_chi[0] * model.sigma**2 / model.prior_nu
        seg_params = rng.normal(prior_mean, prior_std, size=n_seg)
        params = seg_params[seg_ids]
        obs = rng.normal(params, model.sigma)
    else:
        seg_params = rng.dirichlet(model.prior_chi, size=n_seg)
        params = seg_params[seg_ids]
        cum = np.cumsum(params, axis=1)
        u = rng.random(T) * cum[:, -1]
        obs = np.minimum((u[:, None] < cum).argmax(axis=1), model.num_categories - 1) + 1

    return EnvTrace(observations=obs, params=params, changes=changes,
                    run_lengths=run_lengths_from_changes(changes))


def gaussian_task(sigma: float, p_c: float, T: int, seed: int) -> EnvConfig:
    """Mean-estimation task: prior N(0, 1), likelihood N(theta, sigma^2)."""
    return EnvConfig(gaussian_model(sigma, mu0=0.0, sigma0=1.0), p_c, T, seed)


def categorical_task(s: float, p_c: float, T: int, seed: int,
                     num_categories: int = 5) -> EnvConfig:
    """State-frequency task: prior Dirichlet(s * 1) over K = 5 categories."""
    return EnvConfig(categorical_model(num_categories, s), p_c, T, seed)


def write_trace_csv(trace: EnvTrace, path, model: ConjugateModel) -> None:
    """Dump a trace as CSV with header ``t,c,y,theta...``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if model.kind == GAUSSIAN:
            writer.writerow(["t", "c", "y", "theta"])
            for t in range(len(trace.observations)):
                writer.writerow([t + 1, int(trace.changes[t]),
                                 _fmt(trace.observations[t]), _fmt(trace.params[t])])
        else:
            k = model.num_categories
            writer.writerow(["t", "c", "y"] + [f"theta{i + 1}" for i in range(k)])
            for t in range(len(trace.observations)):
                writer.writerow([t + 1, int(trace.changes[t]), int(trace.observations[t])]
                                + [_fmt(v) for v in trace.params[t]])


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"
