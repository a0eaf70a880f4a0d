"""
Two-sample Z-test against its posterior
=======================================

With a flat prior, Pr(theta <= 0 | data) and the one-sided p-value are the
same expression. A N(mu0, sigma0^2) prior approaches it as sigma0^2 grows.
"""

# %%
from lindley import NormalPrior, TwoSampleSummary, normal_pop, z_pvalues

s = TwoSampleSummary(theta_hat=0.35, sigma2=1.0, n=40)
print("one-sided p    ", z_pvalues(s).p_upper)
print("flat-prior PoP ", normal_pop(s).pop_le)

# %%
print(f"{'sigma0^2':>10}  {'PoP':>12}  {'|PoP - p|':>10}")
p = z_pvalues(s).p_upper
for k in range(0, 9, 2):
    pop = normal_pop(s, NormalPrior(0.0, 10.0**k)).pop_le
    print(f"{10.0**k:>10.0e}  {pop:>12.8f}  {abs(pop - p):>10.2e}")
