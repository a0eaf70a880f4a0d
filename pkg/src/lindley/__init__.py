"""Frequentist p-values and Bayesian posterior probabilities of the null.

The modules pair each one-sided test with the posterior probability of the
same one-sided null, so the two can be compared on equal footing:

* :mod:`lindley.special`: incomplete beta and normal distribution functions.
* :mod:`lindley.discrete`: binomial, negative-binomial and Beta-posterior results.
* :mod:`lindley.normal`: the two-sample Z-test with known variance.
* :mod:`lindley.mvn`: contrast tests on a multivariate normal mean.
* :mod:`lindley.random_effects`: ML and Gibbs fits of a random-intercept model.
* :mod:`lindley.experiments`: reproducible tables and figure datasets.
"""

__version__ = "0.1.0"

from .discrete import (
    BetaParams,
    BinomialSample,
    beta_posterior_pop,
    binom_exact_pvalue,
    binom_exact_test,
    binom_normal_approx_pvalue,
    binom_normal_approx_test,
    lindley_point_mass_pop,
    negbinom_pvalue,
    two_sided_pvalue_discrete,
)
from .errors import (
    ConditioningError,
    DegenerateVarianceError,
    DesignError,
    DomainError,
    FittingError,
    NumericalError,
    SamplerDivergenceError,
)
from .mvn import MvnModel, MvnPosterior, MvnPrior, mvn_pop, mvn_posterior, mvn_pvalues, reject_all, sasabuchi_z
from .normal import NormalPrior, TwoSampleSummary, birth_example_pop, normal_pop, normal_posterior, z_pvalues
from .random_effects import (
    GibbsPop,
    HypothesisThresholds,
    LmmConfig,
    LmmData,
    LmmFit,
    fit_lmm_ml,
    generate_lmm,
    gibbs_pop,
    gibbs_sample,
    lmm_loglik,
    wald_test_beta1,
    wald_test_tau2,
)
from .reports import PosteriorReport, TestReport
from .special import inc_beta_pair, log_gamma, normal_cdf, reg_inc_beta

__all__ = [name for name in dir() if not name.startswith("_")]
