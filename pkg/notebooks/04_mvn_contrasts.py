"""
Contrasts on a bivariate normal mean
====================================

1000 simulated data sets with n = 100 from N_2(0, I). Each contrast gets a
one-sided p-value and a posterior probability under a vague N(0, 1000 I) prior.
"""

# %%
import numpy as np

from lindley.experiments import run_fig_mvn

recs = run_fig_mvn(replications=1000, seed=2020)
p = np.array([r.p_value for r in recs])
q = np.array([r.pop for r in recs])
p2 = np.array([r.extras["p_two_sided"] for r in recs])
q2 = np.array([r.extras["pop_two_sided"] for r in recs])

print("max |PoP - p|, one-sided ", np.abs(p - q).max())
print("max |PoP - p|, two-sided ", np.abs(p2 - q2).max())
print("correlation              ", np.corrcoef(p, q)[0, 1])

# %% [markdown]
# The gap comes from shrinkage toward mu0 = 0 under Sigma0 = 1000 I, whose
# relative size is 1 / (1 + 1000 n), about 1e-5 here.

# %%
for lo, hi in [(0, 0.05), (0.05, 0.5), (0.5, 1)]:
    sel = (p >= lo) & (p < hi)
    print(f"p in [{lo}, {hi}): {sel.sum():4d} values, mean gap {np.abs(p - q)[sel].mean():.2e}")
