"""
Boys and girls: one data set, four answers
==========================================

28,298 boys among 56,099 births. Is the probability of a boy above one half?
"""

# %%
from lindley import (
    BetaParams,
    BinomialSample,
    beta_posterior_pop,
    binom_exact_pvalue,
    binom_normal_approx_pvalue,
    lindley_point_mass_pop,
    two_sided_pvalue_discrete,
)
from lindley.golden import TABLE1

births = BinomialSample(28298, 56099)
print(f"observed proportion {births.proportion:.7f}")

# %% [markdown]
# The one-sided null is theta <= 0.5. Exact and normal-approximation p-values:

# %%
print("exact binomial p       ", round(binom_exact_pvalue(births, 0.5, "upper"), 8))
print("normal approximation p ", round(binom_normal_approx_pvalue(births, 0.5, "upper"), 8))
print("two-sided p            ", round(two_sided_pvalue_discrete(births, 0.5, "normal_approx"), 8))

# %% [markdown]
# A prior that puts half its mass on theta = 0.5 exactly gives the opposite
# verdict, while a continuous prior over theta lands next to the p-value.

# %%
print("point-mass prior, Pr(theta = 0.5 | y) ", round(lindley_point_mass_pop(births, 0.5), 7))
print("Beta(1, 1) prior, Pr(theta <= 0.5 | y)", round(beta_posterior_pop(births, BetaParams(1, 1)).pop_le, 8))

# %% [markdown]
# Shrinking the Beta(alpha, alpha) prior barely moves the posterior at this sample size.

# %%
print(f"{'alpha=beta':>12}  {'Pr(theta<=0.5|y)':>18}  {'printed':>10}")
for a, printed in TABLE1:
    pop = beta_posterior_pop(births, BetaParams(a, a)).pop_le
    print(f"{a:>12g}  {pop:>18.8f}  {printed:>10.8f}")
