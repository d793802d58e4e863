"""Statistical verdicts shared by the Monte-Carlo experiments.

Normal-approximation binomial intervals, Pearson chi-square goodness of fit
against a discrete radial law (with bin pooling), and z-score comparison of an
estimate against its closed form.  Chi-square critical values at the 0.001
level come from a built-in table up to df=64 and the Wilson-Hilferty
approximation beyond, so no statistics package is required at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .laws import RadialLaw

# upper 0.999 quantiles of chi-square, df = 1..64
_CHI2_999 = (
    10.827566, 13.815511, 16.266236, 18.466827,
    20.515006, 22.457744, 24.321886, 26.124482,
    27.877165, 29.588298, 31.264134, 32.909490,
    34.528179, 36.123274, 37.697298, 39.252355,
    40.790217, 42.312396, 43.820196, 45.314747,
    46.797038, 48.267942, 49.728232, 51.178598,
    52.619656, 54.051962, 55.476020, 56.892285,
    58.301173, 59.703064, 61.098306, 62.487219,
    63.870099, 65.247217, 66.618829, 67.985168,
    69.346452, 70.702887, 72.054663, 73.401958,
    74.744938, 76.083763, 77.418578, 78.749524,
    80.076732, 81.400326, 82.720423, 84.037134,
    85.350565, 86.660815, 87.967980, 89.272151,
    90.573412, 91.871847, 93.167533, 94.460545,
    95.750954, 97.038829, 98.324234, 99.607233,
    100.887885, 102.166248, 103.442377, 104.716325,
)

_Z_999 = 3.090232306167813  # standard normal 0.999 quantile


@dataclass(frozen=True)
class TestVerdict:
    name: str
    statistic: float
    threshold: float
    passed: bool
    details: str = ""


def chi2_critical_999(df: int) -> float:
    """Chi-square upper 0.999 quantile; Wilson-Hilferty beyond the table."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if df <= len(_CHI2_999):
        return _CHI2_999[df - 1]
    return df * (1.0 - 2.0 / (9.0 * df) + _Z_999 * math.sqrt(2.0 / (9.0 * df))) ** 3


def binomial_ci(successes: int, n: int, z: float = 3.0) -> tuple[float, float]:
    """Normal-approximation confidence interval, clipped to [0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= successes <= n:
        raise ValueError("successes must lie in [0, n]")
    est = successes / n
    half = z * math.sqrt(est * (1.0 - est) / n)
    return max(est - half, 0.0), min(est + half, 1.0)


def _pool(counts: list[float], expected: list[float], pooling_min: float):
    """Merge adjacent bins until every expected count reaches pooling_min."""
    pooled_o: list[float] = []
    pooled_e: list[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(counts, expected):
        acc_o += o
        acc_e += e
        if acc_e >= pooling_min:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if pooled_e:
            pooled_o[-1] += acc_o
            pooled_e[-1] += acc_e
        else:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
    return pooled_o, pooled_e


def chi_square_gof(observed: Mapping[int, int], expected: RadialLaw,
                   pooling_min: int = 5, name: str = "chi-square") -> TestVerdict:
    """Pearson goodness-of-fit of observed level counts against a radial law.

    Observed levels below the law's window (including ZERO_LEVEL draws) land in
    the lower-tail bin, levels above in the upper-tail bin.  Bins are pooled so
    every expected count is at least ``pooling_min``; the verdict is at the
    0.001 significance level with df = pooled bins - 1.
    """
    n = sum(observed.values())
    if n < 1:
        raise ValueError("need at least one observation")
    lo, hi = expected.levels[0], expected.levels[-1]
    bins_o = [0.0] * (len(expected.levels) + 2)
    for level, count in observed.items():
        if level < lo:
            bins_o[0] += count
        elif level > hi:
            bins_o[-1] += count
        else:
            bins_o[1 + level - lo] += count
    bins_e = [expected.lower_tail * n,
              *(m * n for m in expected.masses),
              expected.upper_tail * n]
    pooled_o, pooled_e = _pool(bins_o, bins_e, pooling_min)
    if len(pooled_e) < 2:
        raise ValueError("fewer than 2 pooled bins; the law is degenerate here")
    statistic = math.fsum((o - e) ** 2 / e for o, e in zip(pooled_o, pooled_e))
    df = len(pooled_e) - 1
    threshold = chi2_critical_999(df)
    return TestVerdict(name=name, statistic=statistic, threshold=threshold,
                       passed=statistic <= threshold,
                       details=f"df={df}, n={n}, bins={len(pooled_e)}")


def compare_to_closed_form(estimate: float, se: float, closed_form: float,
                           z: float = 3.0, name: str = "closed-form") -> TestVerdict:
    """Pass iff |estimate - closed_form| <= z * se."""
    if se < 0:
        raise ValueError("standard error must be nonnegative")
    diff = abs(estimate - closed_form)
    statistic = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
    return TestVerdict(name=name, statistic=statistic, threshold=z,
                       passed=diff <= z * se,
                       details=f"estimate={estimate:.6g} closed={closed_form:.6g} se={se:.3g}")
