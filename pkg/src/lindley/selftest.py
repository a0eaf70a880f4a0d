"""Check every closed-form published value against a fresh computation."""

from __future__ import annotations

from dataclasses import dataclass

from . import golden
from .discrete import (
    BetaParams,
    BinomialSample,
    beta_posterior_pop,
    binom_exact_pvalue,
    binom_normal_approx_pvalue,
    lindley_point_mass_pop,
    negbinom_pvalue,
    two_sided_pvalue_discrete,
)


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    expected: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<34} observed={self.observed:.10g} "
                f"expected={self.expected:.10g} tol={self.tolerance:.1e}")


def _observed_scalars() -> dict[str, float]:
    birth = BinomialSample(golden.BIRTH["y"], golden.BIRTH["n"])
    coin = BinomialSample(golden.COIN["y"], golden.COIN["n"])
    return {
        "birth_exact_binomial_p": binom_exact_pvalue(birth, 0.5, "upper"),
        "birth_normal_approx_p": binom_normal_approx_pvalue(birth, 0.5, "upper"),
        "birth_normal_approx_lower_p": binom_normal_approx_pvalue(birth, 0.5, "lower"),
        "birth_two_sided_p": two_sided_pvalue_discrete(birth, 0.5, "normal_approx"),
        "birth_point_mass_pop": lindley_point_mass_pop(birth, 0.5),
        "birth_beta11_pop": beta_posterior_pop(birth, BetaParams(1.0, 1.0), 0.5).pop_le,
        "coin_binomial_p": binom_exact_pvalue(coin, 0.5, "upper"),
        "coin_negbinom_p": negbinom_pvalue(coin, 0.5),
    }


def run_selftest(tolerance_scale: float = 1.0) -> list[Check]:
    """Return one :class:`Check` per golden value.

    ``tolerance_scale`` multiplies every tolerance; 0 forces failures and
    exists so the failure path of the harness can be exercised.
    """
    checks = []
    observed = _observed_scalars()
    for name, (expected, tol) in golden.SCALARS.items():
        checks.append(Check(name, observed[name], expected, tol * tolerance_scale))
    for label, data, table, tol in (
        ("table1", golden.BIRTH, golden.TABLE1, golden.TABLE1_TOL),
        ("table2", golden.COIN, golden.TABLE2, golden.TABLE2_TOL),
    ):
        sample = BinomialSample(data["y"], data["n"])
        for a, expected in table:
            pop = beta_posterior_pop(sample, BetaParams(a, a), 0.5).pop_le
            checks.append(Check(f"{label}[alpha=beta={a:g}]", pop, expected, tol * tolerance_scale))
    return checks
