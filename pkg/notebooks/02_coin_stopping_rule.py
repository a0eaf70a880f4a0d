"""
Nine heads in twelve tosses
===========================

The same tosses give different p-values depending on whether n was fixed in
advance (binomial) or tossing stopped at the third tail (negative binomial).
The posterior does not care about the stopping rule, and as the Beta prior
flattens it converges to the negative-binomial p-value.
"""

# %%
from lindley import BetaParams, BinomialSample, beta_posterior_pop, binom_exact_pvalue, negbinom_pvalue
from lindley.experiments import run_fig_coin_sweep
from lindley.golden import TABLE2

coin = BinomialSample(9, 12)
print("binomial p          ", round(binom_exact_pvalue(coin, 0.5), 8))
print("negative binomial p ", round(negbinom_pvalue(coin, 0.5), 8))

# %%
print(f"{'alpha=beta':>12}  {'Pr(theta<=0.5|y)':>18}")
for a, _ in TABLE2:
    print(f"{a:>12g}  {beta_posterior_pop(coin, BetaParams(a, a)).pop_le:>18.6f}")

# %% [markdown]
# Holding y/n at 0.75 while n grows: the negative-binomial log-ratio to the
# posterior stays near zero, the binomial one does not.

# %%
print(f"{'n':>4} {'p_binom':>10} {'p_negbinom':>11} {'PoP':>10} {'log(pB/PoP)':>12} {'log(pNB/PoP)':>13}")
for r in run_fig_coin_sweep(48):
    e = r.extras
    print(f"{r.parameters['n']:>4} {e['p_binom']:>10.3g} {e['p_negbinom']:>11.3g} {r.pop:>10.3g} "
          f"{e['log_ratio_binom']:>12.4f} {e['log_ratio_negbinom']:>13.2e}")
