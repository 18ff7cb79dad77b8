"""The two binned experiments that tell the surprise measures apart.

Experiment 1 conditions on the sign of the prediction error relative to the
prediction: the ratio surprise is larger for underestimates, the Shannon
surprise for overestimates.  Experiment 2 conditions on time points where
the observation is equally probable under the current and the prior belief:
there the ratio surprise pins to 1 while the Shannon surprise still falls
with that probability.  Writes plots when matplotlib is available.
"""

import numpy as np

from bayeschange.predictions import PredictionConfig, run_prediction1, run_prediction2

cfg = PredictionConfig(kind="nas12", param=0.1)
rows1 = run_prediction1(cfg, seed=2)
rows2 = run_prediction2(cfg, seed=2)

print("Experiment 1: sign-bias effect (nas12, 20 subjects)")
print(f"{'delta':>6s} {'ratio +':>9s} {'ratio -':>9s} {'shannon +':>10s} {'shannon -':>10s}")
by = {(r["delta"], r["sign"]): r for r in rows1}
for d in cfg.delta_grid:
    rp, rm = by[(d, 1)], by[(d, -1)]
    if rp["n_subjects"] >= 2 and rm["n_subjects"] >= 2:
        print(f"{d:6.1f} {rp['mean_sbf']:9.3f} {rm['mean_sbf']:9.3f} "
              f"{rp['mean_ssh']:10.3f} {rm['mean_ssh']:10.3f}")

print("\nExperiment 2: matched predictive probability")
print(f"{'p':>6s} {'ratio':>8s} {'shannon':>9s} {'-log p':>8s}")
for r in rows2:
    if r["n_subjects"] >= 2:
        print(f"{r['p']:6.3f} {r['mean_sbf']:8.3f} {r['mean_ssh']:9.3f} "
              f"{-np.log(r['p']):8.3f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for sign, color in ((1, "C1"), (-1, "C0")):
        sel = [by[(d, sign)] for d in cfg.delta_grid
               if by[(d, sign)]["n_subjects"] >= 2]
        d = [r["delta"] for r in sel]
        axes[0].errorbar(d, [r["mean_sbf"] for r in sel],
                         [r["sem_sbf"] for r in sel],
                         color=color, label=f"ratio surprise, sign {sign:+d}")
        axes[0].errorbar(d, [r["mean_ssh"] for r in sel],
                         [r["sem_ssh"] for r in sel], ls="--",
                         color=color, label=f"Shannon, sign {sign:+d}")
    axes[0].set_xlabel("absolute prediction error")
    axes[0].legend(fontsize=7)
    pop = [r for r in rows2 if r["n_subjects"] >= 2]
    axes[1].errorbar([r["p"] for r in pop], [r["mean_sbf"] for r in pop],
                     [r["sem_sbf"] for r in pop], label="ratio surprise")
    axes[1].errorbar([r["p"] for r in pop], [r["mean_ssh"] for r in pop],
                     [r["sem_ssh"] for r in pop], label="Shannon surprise")
    axes[1].set_xlabel("matched predictive probability p")
    axes[1].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("surprise_dissociation.png", dpi=120)
    print("\nwrote surprise_dissociation.png")
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
