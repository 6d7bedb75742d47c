"""Hypothesis tests for network effects, with degeneracy-aware routing.

Routing summary: the same-sender and same-receiver estimators are always
degenerate under their nulls, so those effects go straight to the
subsampled (reduced) test.  The reciprocity and sender-receiver
estimators may or may not be degenerate; a diagnostic compares the
estimated projection variance against a vanishing threshold and picks the
studentized complete test (non-degenerate) or the reduced test
(degenerate) accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import EmptyInputError, ZeroVarianceError
from .estimators import (
    EffectEstimate,
    complete_estimate,
    mean_edge,
    projection_variance,
    reduced_estimate,
    sample_quadruples,
)
from .network import DirectedWeightedNetwork, EffectKind

__all__ = [
    "DegeneracyDiagnosis",
    "TestReport",
    "LocalEffects",
    "diagnose_degeneracy",
    "studentized_complete_test",
    "reduced_test",
    "test_effect",
    "test_effect_repeated",
    "combine_p_values",
    "aggregated_reduced_test",
    "local_effects",
]

MIN_P_VALUE = 1e-300

BRANCH_REDUCED = "reduced"
BRANCH_COMPLETE = "studentized_complete"


@dataclass(frozen=True)
class DegeneracyDiagnosis:
    """Outcome of the degeneracy check for one effect.

    ``verdict`` is "non_degenerate" exactly when ``xi_squared`` exceeds
    ``threshold`` = c_constant * n^(-1/2) * sqrt(log n) (natural log).
    Both numbers are reported so borderline calls can be audited.
    """

    effect: EffectKind
    xi_squared: float
    threshold: float
    c_constant: float
    verdict: str

    @property
    def non_degenerate(self) -> bool:
        return self.verdict == "non_degenerate"


@dataclass(frozen=True)
class TestReport:
    """Result of testing one effect at level alpha.

    ``reject`` holds exactly when ``p_value`` < ``alpha``; the p-value is
    two-sided.  ``subsample_exponent`` and ``seeds`` are set on the
    reduced branch only, and ``diagnosis`` is present exactly for the two
    effects whose pipeline starts with a degeneracy check.
    """

    effect: EffectKind
    n: int
    alpha: float
    branch: str
    statistic: float
    p_value: float
    reject: bool
    estimate: EffectEstimate
    subsample_exponent: float | None = None
    seeds: tuple[int, ...] | None = None
    diagnosis: DegeneracyDiagnosis | None = None


@dataclass(frozen=True, eq=False)
class LocalEffects:
    """Per-node empirical effect analogues for exploratory use."""

    reciprocity: np.ndarray
    same_sender: np.ndarray
    same_receiver: np.ndarray
    sender_receiver: np.ndarray


def _two_sided_p(statistic: float) -> float:
    p = 2.0 * float(ndtr(-abs(statistic)))
    return min(max(p, MIN_P_VALUE), 1.0)


def diagnose_degeneracy(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    c_constant: float = 1.0,
) -> DegeneracyDiagnosis:
    """Decide whether the complete estimator of an effect is degenerate.

    The projection-variance estimate concentrates at rate
    n^(-1/2) sqrt(log n) around its population value, which is zero in
    the degenerate case and bounded away from zero otherwise, so
    comparing against c_constant times that rate separates the two.
    Supported for the reciprocity and sender-receiver effects only.
    """
    if c_constant <= 0:
        raise ValueError(f"c_constant must be positive, got {c_constant}")
    net.require_nodes(3, "diagnose_degeneracy")
    xi2 = projection_variance(net, effect)
    n = net.n
    threshold = c_constant * math.sqrt(math.log(n) / n)
    verdict = "non_degenerate" if xi2 > threshold else "degenerate"
    return DegeneracyDiagnosis(
        effect=effect,
        xi_squared=xi2,
        threshold=threshold,
        c_constant=c_constant,
        verdict=verdict,
    )


def studentized_complete_test(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    alpha: float = 0.05,
) -> TestReport:
    """Test an effect with the complete estimator, studentized by the
    estimated projection standard deviation.

    Statistic: sqrt(n) * estimate / sqrt(projection_variance), compared
    against standard normal quantiles (two-sided).  Only valid on the
    non-degenerate branch; a zero variance estimate means the caller
    routed the wrong branch and raises ZeroVarianceError.
    """
    _check_alpha(alpha)
    net.require_nodes(3, "studentized_complete_test")
    estimate = complete_estimate(net, effect)
    xi2 = projection_variance(net, effect)
    if xi2 == 0.0:
        raise ZeroVarianceError(
            f"projection variance is exactly zero for {effect.value}; "
            "the studentized complete test is undefined (use the reduced test)"
        )
    statistic = math.sqrt(net.n) * estimate.value / math.sqrt(xi2)
    p = _two_sided_p(statistic)
    return TestReport(
        effect=effect,
        n=net.n,
        alpha=alpha,
        branch=BRANCH_COMPLETE,
        statistic=statistic,
        p_value=p,
        reject=p < alpha,
        estimate=estimate,
    )


def reduced_test(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    alpha: float = 0.05,
    subsample_exponent: float = 1.2,
    seed: int = 0,
) -> TestReport:
    """Test an effect via the subsampled 4-tuple kernel.

    With m = round(n ** subsample_exponent) quadruples, the statistic is
    sqrt(m) * mean / spread of the kernel values, i.e. exactly the
    standardized subsample mean, compared against standard normal
    quantiles (two-sided).
    """
    _check_alpha(alpha)
    net.require_nodes(4, "reduced_test")
    sample = sample_quadruples(net.n, subsample_exponent, seed)
    moment = reduced_estimate(net, effect, sample)
    if moment.sigma_hat == 0.0:
        raise ZeroVarianceError(
            f"all {moment.m} kernel values are identical for {effect.value}; "
            "the studentized statistic is undefined (constant network?)"
        )
    statistic = math.sqrt(moment.m) * moment.eta_hat / moment.sigma_hat
    p = _two_sided_p(statistic)
    return TestReport(
        effect=effect,
        n=net.n,
        alpha=alpha,
        branch=BRANCH_REDUCED,
        statistic=statistic,
        p_value=p,
        reject=p < alpha,
        estimate=EffectEstimate(effect=effect, value=moment.eta_hat, method="reduced"),
        subsample_exponent=subsample_exponent,
        seeds=(seed,),
    )


def test_effect(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    alpha: float = 0.05,
    subsample_exponent: float = 1.2,
    seed: int = 0,
    c_constant: float = 1.0,
) -> TestReport:
    """Run the full pipeline for one effect.

    Same-sender and same-receiver go straight to the reduced test (their
    estimators are always degenerate under the null and no diagnostic is
    defined).  Reciprocity and sender-receiver are first diagnosed; the
    non-degenerate verdict routes to the studentized complete test and
    the degenerate verdict to the reduced test, with the diagnosis
    attached to the report either way.
    """
    net.require_nodes(4, "test_effect")
    if effect in (EffectKind.SAME_SENDER, EffectKind.SAME_RECEIVER):
        return reduced_test(net, effect, alpha, subsample_exponent, seed)
    diagnosis = diagnose_degeneracy(net, effect, c_constant)
    if diagnosis.non_degenerate:
        report = studentized_complete_test(net, effect, alpha)
    else:
        report = reduced_test(net, effect, alpha, subsample_exponent, seed)
    return TestReport(
        effect=report.effect,
        n=report.n,
        alpha=report.alpha,
        branch=report.branch,
        statistic=report.statistic,
        p_value=report.p_value,
        reject=report.reject,
        estimate=report.estimate,
        subsample_exponent=report.subsample_exponent,
        seeds=report.seeds,
        diagnosis=diagnosis,
    )


def test_effect_repeated(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    alpha: float = 0.05,
    subsample_exponent: float = 1.2,
    seeds: Sequence[int] = (0,),
    c_constant: float = 1.0,
) -> TestReport:
    """Full pipeline with several subsample draws on the reduced branch.

    Identical routing to :func:`test_effect`; wherever that would run one
    reduced test, this runs one per seed and combines the p-values.  The
    studentized complete branch is deterministic, so repeats do not apply
    there.
    """
    seeds = tuple(int(s) for s in seeds)
    if effect in (EffectKind.SAME_SENDER, EffectKind.SAME_RECEIVER):
        return aggregated_reduced_test(net, effect, alpha, subsample_exponent, seeds)
    diagnosis = diagnose_degeneracy(net, effect, c_constant)
    if diagnosis.non_degenerate:
        report = studentized_complete_test(net, effect, alpha)
    else:
        report = aggregated_reduced_test(net, effect, alpha, subsample_exponent, seeds)
    return TestReport(
        effect=report.effect,
        n=report.n,
        alpha=report.alpha,
        branch=report.branch,
        statistic=report.statistic,
        p_value=report.p_value,
        reject=report.reject,
        estimate=report.estimate,
        subsample_exponent=report.subsample_exponent,
        seeds=report.seeds,
        diagnosis=diagnosis,
    )


def combine_p_values(p_values: Sequence[float]) -> float:
    """Combine p-values by averaging their normal z-scores.

    Each p maps to z = Phi^{-1}(1 - p); the combined p-value is
    1 - Phi(mean z).  Because an average of standard normals has variance
    at most 1 under arbitrary dependence, the combination is valid
    (conservative) for dependent inputs.  Zeros are clamped to the
    smallest positive p to keep the quantile finite.
    """
    arr = np.asarray(list(p_values), dtype=np.float64)
    if arr.size == 0:
        raise EmptyInputError("no p-values to combine")
    if np.any((arr < 0.0) | (arr > 1.0)) or not np.isfinite(arr).all():
        raise ValueError("p-values must lie in [0, 1]")
    arr = np.maximum(arr, MIN_P_VALUE)
    z = -ndtri(arr)  # Phi^{-1}(1 - p), computed accurately for tiny p
    combined = float(ndtr(-float(np.mean(z))))
    return min(max(combined, MIN_P_VALUE), 1.0)


def aggregated_reduced_test(
    net: DirectedWeightedNetwork,
    effect: EffectKind,
    alpha: float = 0.05,
    subsample_exponent: float = 1.2,
    seeds: Sequence[int] = (0,),
) -> TestReport:
    """Reduced test repeated over several subsample seeds, with the
    two-sided p-values combined by :func:`combine_p_values`.

    A single seed reduces to :func:`reduced_test` exactly.  The reported
    statistic is the mean z-score and the estimate is the mean of the
    per-seed subsampled estimates.
    """
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise EmptyInputError("need at least one seed")
    if len(seeds) == 1:
        return reduced_test(net, effect, alpha, subsample_exponent, seeds[0])
    reports = [reduced_test(net, effect, alpha, subsample_exponent, s) for s in seeds]
    p_values = [r.p_value for r in reports]
    combined = combine_p_values(p_values)
    statistic = float(np.mean(-ndtri(np.maximum(p_values, MIN_P_VALUE))))
    value = float(np.mean([r.estimate.value for r in reports]))
    return TestReport(
        effect=effect,
        n=net.n,
        alpha=alpha,
        branch=BRANCH_REDUCED,
        statistic=statistic,
        p_value=combined,
        reject=combined < alpha,
        estimate=EffectEstimate(effect=effect, value=value, method="reduced"),
        subsample_exponent=subsample_exponent,
        seeds=seeds,
    )


def local_effects(net: DirectedWeightedNetwork) -> LocalEffects:
    """Per-node effect analogues around the grand mean.

    With d[i,j] = e[i,j] - mean_edge on off-diagonal entries, node i gets

    * reciprocity:      sum_j d[i,j] d[j,i] / (n-1)
    * same-sender:      sum_{j != k} d[i,j] d[i,k] / ((n-1)(n-2))
    * same-receiver:    sum_{j != k} d[j,i] d[k,i] / ((n-1)(n-2))
    * sender-receiver:  sum_{j != k} d[j,i] d[i,k] / ((n-1)(n-2))

    with j, k ranging over ordered pairs of nodes distinct from i.  All
    four reduce to centered row/column sums, O(n) per node.
    """
    net.require_nodes(3, "local_effects")
    n = net.n
    mu = mean_edge(net)
    d = net.weights - mu
    np.fill_diagonal(d, 0.0)
    row = d.sum(axis=1)
    col = d.sum(axis=0)
    row_sq = (d * d).sum(axis=1)
    col_sq = (d * d).sum(axis=0)
    recip = (d * d.T).sum(axis=1)
    pair_norm = (n - 1.0) * (n - 2.0)
    return LocalEffects(
        reciprocity=recip / (n - 1.0),
        same_sender=(row * row - row_sq) / pair_norm,
        same_receiver=(col * col - col_sq) / pair_norm,
        sender_receiver=(col * row - recip) / pair_norm,
    )


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
