"""Conjugate beliefs and surprise measures, step by step.

A walk through the core belief algebra: build the two observation models,
update beliefs on a short observation sequence, and watch how the
Bayes-factor surprise and the adaptation rate react when an observation is
better explained by the prior than by the accumulated belief.
"""

import numpy as np

import bayeschange as bc

# A Gaussian task: observations y ~ N(theta, 0.5^2), prior theta ~ N(0, 1).
model = bc.gaussian_model(sigma=0.5)
belief = bc.prior_belief(model)

print("Gaussian mean estimation, sigma = 0.5")
print(f"  prior: mean={bc.point_estimate(model, belief):+.3f}")

# Integrate a few observations near theta = 1.
for y in (1.1, 0.8, 1.3, 0.9):
    belief = bc.bayes_update(model, belief, y)
mean, var = bc.gaussian_mean_var(model, belief)
print(f"  after 4 draws near 1: mean={mean:+.3f}, sd={np.sqrt(var):.3f}")

# Now an observation far from the belief but plausible under the prior.
for y in (1.0, -1.5, -3.0):
    s = bc.surprise_bf(model, belief, y)
    gamma = bc.adaptation_rate(s, m=0.1 / 0.9)  # m = p_c / (1 - p_c) at p_c = 0.1
    print(f"  y={y:+.1f}: surprise={s:8.3f}  adaptation rate={gamma:.3f}")

print()
print("Categorical task, 5 states, prior Dirichlet(1)")
cat = bc.categorical_model(num_categories=5, s=1.0)
b = bc.prior_belief(cat)
for y in (2, 2, 2, 2):
    b = bc.bayes_update(cat, b, y)
print("  counts after seeing state 2 four times:", bc.dirichlet_alpha(b))
print("  estimate:", np.round(bc.point_estimate(cat, b), 3))
for y in (2, 5):
    s = bc.surprise_bf(cat, b, y)
    print(f"  observing state {y}: surprise={s:.3f}")

print()
print("The two roads to the adaptation rate agree:")
y, p_c = -2.0, 0.1
p_cur = bc.predictive(model, belief, y)
p_pri = bc.predictive(model, bc.prior_belief(model), y)
g1 = bc.adaptation_rate(bc.surprise_bf(model, belief, y), p_c / (1 - p_c))
g2 = bc.gamma_from_shannon(bc.shannon_surprise(p_cur, p_pri, p_c),
                           bc.shannon_surprise(p_pri, p_pri, p_c), p_c)
print(f"  from the probability ratio: {g1:.12f}")
print(f"  from the Shannon difference: {g2:.12f}")
