"""Performance measures, parameter tuning, and benchmark orchestration.

The central quantity is the mean squared error between the per-step
estimate and the true latent parameter.  Against the exact Bayesian
estimator (which is MSE-optimal on these environments) the excess
``delta_mse = mse(alg) - mse(exact)`` isolates the approximation error, and
``mean_regret`` measures the cost of running with a mismatched assumed
change probability.  ``transient_mse`` conditions the error on the number
of steps since the last change point, which exposes how quickly an
estimator recovers after a change.

``grid_search`` tunes each algorithm's free parameter by minimizing the
MSE averaged over a few random task instances (3 by default).  Benchmark
and robustness sweeps fan independent (cell, seed) jobs out to a process
pool and reduce them in a fixed order, so results are reproducible
regardless of the parallelism degree.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .environment import EnvConfig, EnvTrace, derive_seed, simulate
from .estimators import OnlineEstimator, make_estimator
from .expfam import GAUSSIAN

__all__ = [
    "RunResult",
    "run_estimator",
    "write_run_csv",
    "mse",
    "transient_mse",
    "transient_mse_curve",
    "delta_mse",
    "mean_regret",
    "grid_search",
    "run_cell",
    "benchmark",
    "robustness",
    "DEFAULT_GRIDS",
    "desk_horizon",
]

# environment stream ids: 0 is consumed by simulate itself
_ESTIMATOR_STREAM = 1

# default tuning grids for the free parameter of each algorithm kind
_M_GRID = tuple(float(10.0**k) for k in np.arange(-4.0, 2.0 + 1e-9, 1.0 / 3.0))
_PC_GRID = (0.1, 0.05, 0.01, 0.005, 0.001, 0.0001)
_OMEGA_GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 1.0)

DEFAULT_GRIDS = {
    "exact": _PC_GRID,
    "mp": _PC_GRID,
    "pf": _PC_GRID,
    "nas10": _PC_GRID,
    "nas12": _PC_GRID,
    "var_smile": _M_GRID,
    "smile": _M_GRID,
    "leaky": _OMEGA_GRID,
}


def desk_horizon(p_c: float) -> int:
    """Benchmark horizon per change probability: 1e5, or 2e5 for p_c <= 0.001."""
    return 200_000 if p_c <= 0.001 else 100_000


@dataclass
class RunResult:
    """Aligned per-step outputs of one estimator run on one trace.

    ``estimates`` and ``truths`` have shape (T, d) with d = 1 for the
    Gaussian task and d = K for the categorical task.  ``estimates[t]`` is
    the estimate after consuming observation t.
    """

    estimates: np.ndarray
    truths: np.ndarray
    run_lengths: np.ndarray
    s_bf: np.ndarray
    s_sh_current: np.ndarray
    s_sh_prior: np.ndarray
    gamma: np.ndarray


def run_estimator(est: OnlineEstimator, trace: EnvTrace) -> RunResult:
    """Feed a trace through an estimator, collecting estimates and surprises."""
    T = len(trace.observations)
    d = 1 if est.model.kind == GAUSSIAN else est.model.num_categories
    estimates = np.empty((T, d))
    s_bf = np.empty(T)
    s_sh_current = np.empty(T)
    s_sh_prior = np.empty(T)
    gamma = np.empty(T)
    obs = trace.observations
    for t in range(T):
        rec = est.step(obs[t])
        estimates[t] = est.estimate()
        s_bf[t] = rec.s_bf
        s_sh_current[t] = rec.s_sh_current
        s_sh_prior[t] = rec.s_sh_prior
        gamma[t] = rec.gamma
    truths = trace.params.reshape(T, d)
    return RunResult(estimates, truths, trace.run_lengths.copy(),
                     s_bf, s_sh_current, s_sh_prior, gamma)


def write_run_csv(result: RunResult, trace: EnvTrace, path) -> None:
    """Step-level trace of one run: ``t,y,estimate...,s_bf,s_sh,gamma``."""
    d = result.estimates.shape[1]
    est_cols = ["estimate"] if d == 1 else [f"estimate{i + 1}" for i in range(d)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "y"] + est_cols + ["s_bf", "s_sh", "gamma"])
        for t in range(len(result.estimates)):
            row = [t + 1, f"{float(trace.observations[t]):.17g}" if d == 1
                   else int(trace.observations[t])]
            row += [f"{v:.17g}" for v in result.estimates[t]]
            row += [f"{result.s_bf[t]:.17g}", f"{result.s_sh_current[t]:.17g}",
                    f"{result.gamma[t]:.17g}"]
            writer.writerow(row)


def mse(result: RunResult) -> float:
    """Time-averaged squared error, summed over parameter components."""
    if len(result.estimates) == 0:
        raise ValueError("empty result")
    if result.estimates.shape != result.truths.shape:
        raise ValueError("estimates and truths are misaligned")
    err = result.estimates - result.truths
    return float(np.mean(np.sum(err * err, axis=1)))


def transient_mse(result: RunResult, n: int):
    """MSE restricted to steps exactly n steps after a change, or None if unseen."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mask = result.run_lengths == n
    if not mask.any():
        return None
    err = result.estimates[mask] - result.truths[mask]
    return float(np.mean(np.sum(err * err, axis=1)))


def transient_mse_curve(result: RunResult, n_max: int) -> np.ndarray:
    """transient_mse for n = 1..n_max as an array, NaN where no data exists."""
    out = np.full(n_max, np.nan)
    for n in range(1, n_max + 1):
        v = transient_mse(result, n)
        if v is not None:
            out[n - 1] = v
    return out


def _check_same_trace(a: RunResult, b: RunResult) -> None:
    if a.truths.shape != b.truths.shape or not np.array_equal(a.truths, b.truths):
        raise ValueError("results do not come from the same trace")


def delta_mse(alg: RunResult, exact: RunResult) -> float:
    """Excess MSE of an algorithm over the exact Bayesian run on the same trace."""
    _check_same_trace(alg, exact)
    return mse(alg) - mse(exact)


def mean_regret(alg_at_assumed: RunResult, exact_at_true: RunResult) -> float:
    """MSE under a mismatched assumed change probability minus the matched-optimal MSE."""
    _check_same_trace(alg_at_assumed, exact_at_true)
    return mse(alg_at_assumed) - mse(exact_at_true)


def _run_single(kind: str, env: EnvConfig, param: float, n_particles: int,
                seed_index: int) -> RunResult:
    cfg = replace(env, seed=derive_seed(env.seed, seed_index))
    trace = simulate(cfg)
    est = make_estimator(kind, env.model, param, n_particles=n_particles,
                         seed=derive_seed(cfg.seed, _ESTIMATOR_STREAM),
                         record_p_c=env.p_c)
    return run_estimator(est, trace)


def grid_search(kind: str, env: EnvConfig, grid, n_seeds: int = 3,
                n_particles: int = 20):
    """Pick the grid point minimizing mean MSE over ``n_seeds`` task instances.

    Returns ``(best_param, table)`` where ``table`` is the full list of
    ``(param, mean_mse)`` pairs.  Ties break toward the smaller parameter.
    """
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    table = []
    for param in grid:
        vals = [mse(_run_single(kind, env, param, n_particles, k))
                for k in range(n_seeds)]
        table.append((param, float(np.mean(vals))))
    best = min(table, key=lambda row: (row[1], row[0]))[0]
    return best, table


# ---------------------------------------------------------------------------
# Benchmark and robustness sweeps
# ---------------------------------------------------------------------------

def run_cell(env: EnvConfig, algorithms: dict, seed_index: int,
             n_transient: int = 0):
    """Run every algorithm on one shared trace; always includes exact inference.

    ``algorithms`` maps a display name to ``(kind, param, n_particles)``.
    Returns ``(rows, transients)`` where rows are
    ``(name, seed_index, mse, delta_mse)`` and transients maps name to the
    transient-MSE curve when ``n_transient > 0``.
    """
    cfg = replace(env, seed=derive_seed(env.seed, seed_index))
    trace = simulate(cfg)
    exact = make_estimator("exact", env.model, env.p_c)
    exact_result = run_estimator(exact, trace)
    exact_mse = mse(exact_result)

    rows = []
    transients = {}
    if n_transient > 0:
        transients["exact"] = transient_mse_curve(exact_result, n_transient)
    for name, (kind, param, n_particles) in algorithms.items():
        if kind == "exact" and param == env.p_c:
            result = exact_result
        else:
            est = make_estimator(kind, env.model, param, n_particles=n_particles,
                                 seed=derive_seed(cfg.seed, _ESTIMATOR_STREAM),
                                 record_p_c=env.p_c)
            result = run_estimator(est, trace)
        rows.append((name, seed_index, mse(result), mse(result) - exact_mse))
        if n_transient > 0:
            transients[name] = transient_mse_curve(result, n_transient)
    return rows, transients


def _cell_job(args):
    return run_cell(*args)


def _pool_map(fn, jobs, n_jobs: int):
    if n_jobs <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, jobs))


def benchmark(envs: list[EnvConfig], algorithms: dict, n_seeds: int = 10,
              n_jobs: int | None = None, n_transient: int = 0):
    """Shared-trace benchmark over environment cells.

    Returns a list of dict rows with keys algorithm, env index, seed, mse,
    delta_mse, plus a transients dict keyed by (env index, name) holding
    per-seed curves.
    """
    n_jobs = os.cpu_count() if n_jobs is None else n_jobs
    jobs = [(env, algorithms, k, n_transient)
            for env in envs for k in range(n_seeds)]
    env_indices = [i for i in range(len(envs)) for _ in range(n_seeds)]
    results = _pool_map(_cell_job, jobs, n_jobs)
    rows = []
    transients: dict = {}
    for env_idx, (cell_rows, cell_tr) in zip(env_indices, results):
        for name, seed_index, m, d in cell_rows:
            rows.append({"algorithm": name, "env": env_idx, "seed": seed_index,
                         "mse": m, "delta_mse": d})
        for name, curve in cell_tr.items():
            transients.setdefault((env_idx, name), []).append(curve)
    return rows, transients


def _regret_job(args):
    kind, env, assumed, param, n_particles, seed_index = args
    alg = _run_single(kind, env, param, n_particles, seed_index)
    opt = _run_single("exact", env, env.p_c, n_particles, seed_index)
    return mean_regret(alg, opt)


def robustness(kind: str, model_factory, sigma_or_s: float, p_c_assumed: float,
               p_c_grid, n_seeds: int = 3, n_particles: int = 20,
               horizon=None, n_jobs: int | None = None, tuned_param=None,
               seed: int = 0):
    """Mean regret of one algorithm tuned at ``p_c_assumed`` across true p_c values.

    ``model_factory(sigma_or_s, p_c, T, seed)`` builds the environment for
    each grid cell (the Gaussian or categorical task constructor).
    ``tuned_param`` overrides the algorithm parameter; by default the
    assumed change probability itself is used for p_c-parameterized kinds.
    Returns rows ``(p_c_true, seed_index, regret)``.
    """
    n_jobs = os.cpu_count() if n_jobs is None else n_jobs
    param = p_c_assumed if tuned_param is None else tuned_param
    jobs = []
    cells = []
    for p_c in p_c_grid:
        T = desk_horizon(p_c) if horizon is None else horizon
        env = model_factory(sigma_or_s, p_c, T, derive_seed(seed, 2))
        for k in range(n_seeds):
            jobs.append((kind, env, p_c_assumed, param, n_particles, k))
            cells.append((p_c, k))
    regrets = _pool_map(_regret_job, jobs, n_jobs)
    return [(p_c, k, r) for (p_c, k), r in zip(cells, regrets)]
