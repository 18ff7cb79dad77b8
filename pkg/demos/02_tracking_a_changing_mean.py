"""Tracking a piecewise-constant mean with every estimator.

Simulates one Gaussian task, runs all eight estimators on the same trace,
and compares their errors, both overall and as a function of the time since
the last change point.  Saves a plot when matplotlib is available.
"""

import numpy as np

import bayeschange as bc
from bayeschange.evaluation import mse, run_estimator, transient_mse_curve

SIGMA, P_C, T, SEED = 0.5, 0.02, 20_000, 7

env = bc.gaussian_task(SIGMA, P_C, T, seed=SEED)
trace = bc.simulate(env)
print(f"Gaussian task: sigma={SIGMA}, p_c={P_C}, T={T}, "
      f"{int(trace.changes.sum())} change points")

m = P_C / (1 - P_C)
estimators = {
    "exact": bc.ExactBayes(env.model, m),
    "mp20": bc.MessagePassing(env.model, 20, m),
    "pf20": bc.ParticleFilter(env.model, 20, m, rng=1),
    "pf1": bc.ParticleFilter(env.model, 1, m, rng=2),
    "var_smile": bc.VarSMiLe(env.model, m),
    "smile": bc.SMiLe(env.model, m),
    "nas10": bc.NasStar(env.model, m, variant="nas10"),
    "nas12": bc.NasStar(env.model, m, variant="nas12"),
    "leaky": bc.LeakyIntegrator(env.model, omega=0.95, m=m),
}

results = {}
for name, est in estimators.items():
    results[name] = run_estimator(est, trace)

exact_mse = mse(results["exact"])
print(f"\n{'algorithm':>10s}  {'MSE':>9s}  {'excess over exact':>18s}")
for name, r in sorted(results.items(), key=lambda kv: mse(kv[1])):
    print(f"{name:>10s}  {mse(r):9.5f}  {mse(r) - exact_mse:18.5f}")

print("\nError n steps after a change (recovery profile):")
ns = [1, 2, 3, 5, 10, 20]
header = "  ".join(f"n={n:<3d}" for n in ns)
print(f"{'algorithm':>10s}  {header}")
for name in ("exact", "pf20", "var_smile", "nas12", "smile", "leaky"):
    curve = transient_mse_curve(results[name], max(ns))
    cells = "  ".join(f"{curve[n - 1]:5.3f}" for n in ns)
    print(f"{name:>10s}  {cells}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    window = slice(0, 1500)
    fig, ax = plt.subplots(figsize=(10, 4))
    t = np.arange(T)[window]
    ax.plot(t, trace.observations[window], ".", ms=2, color="0.7", label="observations")
    ax.plot(t, trace.params[window], "k-", lw=2, label="true mean")
    for name, color in (("exact", "C0"), ("pf20", "C1"), ("leaky", "C3")):
        ax.plot(t, results[name].estimates[window, 0], color=color, lw=1, label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("y")
    ax.legend(ncol=5, fontsize=8)
    fig.tight_layout()
    fig.savefig("tracking_demo.png", dpi=120)
    print("\nwrote tracking_demo.png")
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
