"""A small benchmark sweep with parameter tuning.

Tunes the free parameter of each single-memory algorithm on three short
task instances, then measures excess MSE over exact inference on fresh
traces, for two noise levels.  A desk-sized version of the full benchmark
(`bayeschange benchmark` runs the real thing).
"""

import numpy as np

import bayeschange as bc
from bayeschange.evaluation import DEFAULT_GRIDS, benchmark, grid_search

P_C, T_TUNE, T_EVAL, N_SEEDS = 0.05, 5_000, 20_000, 3

for sigma in (0.5, 2.0):
    tune_env = bc.gaussian_task(sigma, P_C, T_TUNE, seed=99)
    algorithms = {"pf20": ("pf", P_C, 20), "mp20": ("mp", P_C, 20)}
    for kind in ("var_smile", "smile", "nas12", "leaky"):
        best, table = grid_search(kind, tune_env, DEFAULT_GRIDS[kind], n_seeds=3)
        algorithms[kind] = (kind, best, 20)
        print(f"sigma={sigma}: tuned {kind:10s} -> {best:.4g}")

    env = bc.gaussian_task(sigma, P_C, T_EVAL, seed=0)
    rows, _ = benchmark([env], algorithms, n_seeds=N_SEEDS, n_jobs=2)
    print(f"\nexcess MSE over exact inference (sigma={sigma}, p_c={P_C}, "
          f"{N_SEEDS} seeds):")
    deltas = {}
    for r in rows:
        deltas.setdefault(r["algorithm"], []).append(r["delta_mse"])
    for name, vals in sorted(deltas.items(), key=lambda kv: np.mean(kv[1])):
        print(f"  {name:10s} {np.mean(vals):9.5f} +- {np.std(vals):.5f}")
    print()
